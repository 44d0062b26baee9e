#include "saf/io.hpp"

#include "saf/error.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace saf::io {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidData, what); }

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        invalid(what + ": " + e.what());
    }
}

double number_field(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) invalid(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

HerglotzData herglotz_from(const json& j) {
    if (!j.is_object()) invalid("Herglotz data must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key != "h0" && key != "h" && key != "atoms" && key != "infinity") {
            invalid("unknown Herglotz field '" + key + "'");
        }
        (void)value;
    }
    if (j.contains("infinity")) {
        if (!j.at("infinity").is_boolean()) invalid("field 'infinity' must be a boolean");
        if (j.at("infinity").get<bool>()) {
            if (j.size() != 1) invalid("'infinity': true excludes other fields");
            return HerglotzData::infinity();
        }
    }
    std::vector<Atom> atoms;
    if (j.contains("atoms")) {
        const auto& a = j.at("atoms");
        if (!a.is_array()) invalid("field 'atoms' must be an array of [t, w] pairs");
        for (std::size_t k = 0; k < a.size(); ++k) {
            const auto& p = a[k];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                invalid("atoms[" + std::to_string(k) + "] must be a [t, w] pair of numbers");
            }
            atoms.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    }
    return HerglotzData::make(number_field(j, "h0", 0.0), number_field(j, "h", 0.0), std::move(atoms));
}

} // namespace

HerglotzData herglotz_from_json(const std::string& text) {
    return herglotz_from(parse_json(text, "Herglotz JSON"));
}

std::string herglotz_to_json(const HerglotzData& fd) {
    json j;
    if (fd.is_infinity()) {
        j["infinity"] = true;
    } else {
        j["h0"] = fd.h0();
        j["h"] = fd.h();
        j["atoms"] = json::array();
        for (const auto& a : fd.atoms()) j["atoms"].push_back({a.position, a.weight});
    }
    return j.dump();
}

HerglotzData parse_herglotz_spec(const std::string& spec) {
    if (spec == "inf" || spec == "infinity") return HerglotzData::infinity();
    if (!spec.empty() && spec.front() == '{') return herglotz_from_json(spec);
    if (spec.find('=') != std::string::npos) {
        // Inline key=value list; the atoms value is itself JSON.
        json j = json::object();
        std::size_t pos = 0;
        while (pos < spec.size()) {
            const auto eq = spec.find('=', pos);
            if (eq == std::string::npos) invalid("expected key=value in '" + spec + "'");
            const std::string key = spec.substr(pos, eq - pos);
            std::size_t end;
            if (key == "atoms") {
                int depth = 0;
                end = eq + 1;
                for (; end < spec.size(); ++end) {
                    if (spec[end] == '[') ++depth;
                    if (spec[end] == ']' && --depth == 0) {
                        ++end;
                        break;
                    }
                }
                j["atoms"] = parse_json(spec.substr(eq + 1, end - eq - 1), "inline atoms");
            } else {
                end = spec.find(',', eq);
                if (end == std::string::npos) end = spec.size();
                const std::string value = spec.substr(eq + 1, end - eq - 1);
                double v = 0.0;
                const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
                if (ec != std::errc() || ptr != value.data() + value.size()) {
                    invalid("bad number '" + value + "' for '" + key + "'");
                }
                j[key] = v;
            }
            pos = end;
            if (pos < spec.size()) {
                if (spec[pos] != ',') invalid("expected ',' after '" + key + "' in '" + spec + "'");
                ++pos;
            }
        }
        return herglotz_from(j);
    }
    std::ifstream in{std::filesystem::path(spec)};
    if (!in) invalid("cannot read Herglotz data from '" + spec + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return herglotz_from_json(ss.str());
}

ode::ModelDescriptor model_from_json(const std::string& text) {
    const json j = parse_json(text, "model JSON");
    if (!j.is_object() || !j.contains("model") || !j.at("model").is_string()) {
        invalid("model descriptor needs a string field 'model'");
    }
    ode::ModelDescriptor d;
    const auto kind = j.at("model").get<std::string>();
    if (kind == "first_order") {
        d.kind = ode::ModelKind::FirstOrder;
        d.n = 64;
    } else if (kind == "sturm_liouville") {
        d.kind = ode::ModelKind::SturmLiouville;
        d.n = 200;
    } else {
        invalid("unknown model '" + kind + "'");
    }
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) invalid("field 'n' must be an integer");
        d.n = j.at("n").get<int>();
    }
    if (j.contains("q")) {
        const auto& q = j.at("q");
        if (q.is_number()) {
            d.q = ode::Potential::uniform(q.get<double>());
        } else if (q.is_array()) {
            std::vector<double> s;
            for (const auto& v : q) {
                if (!v.is_number()) invalid("field 'q' must hold numbers");
                s.push_back(v.get<double>());
            }
            d.q = ode::Potential::sampled(std::move(s));
        } else {
            invalid("field 'q' must be a number or an array of samples");
        }
    }
    return d;
}

std::string model_to_json(const ode::ModelDescriptor& d) {
    json j;
    j["model"] = d.kind == ode::ModelKind::FirstOrder ? "first_order" : "sturm_liouville";
    j["n"] = d.n;
    if (d.q.is_constant()) {
        j["q"] = d.q.constant;
    } else {
        j["q"] = d.q.samples;
    }
    return j.dump();
}

cplx parse_complex(const std::string& s) {
    // unit_value is what a bare sign means ("i", "-i"); NaN forbids it.
    auto number = [&](const std::string& t, double unit_value) {
        if ((t.empty() || t == "+" || t == "-") && std::isnan(unit_value)) {
            invalid("cannot parse complex number '" + s + "'");
        }
        if (t.empty() || t == "+") return unit_value;
        if (t == "-") return -unit_value;
        double v = 0.0;
        const char* first = t.data() + (t.front() == '+' ? 1 : 0);
        const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
            invalid("cannot parse complex number '" + s + "'");
        }
        return v;
    };
    if (s.empty()) invalid("cannot parse an empty complex number");
    if (s.back() != 'i') return {number(s, std::nan("")), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    // The imaginary part starts at the last sign that is not an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) return {0.0, number(body, 1.0)};
    return {number(body.substr(0, split), std::nan("")), number(body.substr(split), 1.0)};
}

std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string format_complex(cplx z) {
    const double im = z.imag();
    std::string out = format_double(z.real() == 0.0 ? 0.0 : z.real());
    if (im == 0.0) return out;
    out += (std::signbit(im) ? "-" : "+");
    out += format_double(std::abs(im));
    out += "i";
    return out;
}

std::string assembly_header_json(const ext::ExtensionAssembly& assembly) {
    json j;
    j["layout"] = {assembly.layout.n_base, assembly.layout.m, assembly.layout.aug};
    j["n_mesh"] = assembly.n_mesh;
    if (assembly.fd.is_infinity()) {
        j["infinity"] = true;
    } else {
        j["h0"] = assembly.fd.h0();
        j["h"] = assembly.fd.h();
        j["atoms"] = json::array();
        for (const auto& a : assembly.fd.atoms()) j["atoms"].push_back({a.position, a.weight});
    }
    return j.dump(2);
}

} // namespace saf::io
