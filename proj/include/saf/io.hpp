#pragma once

// Text formats shared by the C API and the command-line tool.
//
//   Herglotz data   {"h0": 1.0, "h": 0.0, "atoms": [[t, w], ...]} or {"infinity": true}
//   inline form     "h0=1,h=0,atoms=[[0,1],[2,0.5]]" or "inf"
//   model           {"model": "first_order" | "sturm_liouville", "n": 200, "q": 0 | [q0, q1, ...]}
//   complex         "a+bi", e.g. "2+1i", "-0.5-3i", "1i"

#include "saf/extension.hpp"
#include "saf/herglotz.hpp"
#include "saf/ode_models.hpp"

#include <string>

namespace saf::io {

HerglotzData herglotz_from_json(const std::string& text);
std::string herglotz_to_json(const HerglotzData& fd);

// "inf", the inline form, a JSON object, or a path to a JSON file.
HerglotzData parse_herglotz_spec(const std::string& spec);

ode::ModelDescriptor model_from_json(const std::string& text);
std::string model_to_json(const ode::ModelDescriptor& d);

// Parses "a+bi", "a-bi", "a", "bi", "i"; throws InvalidData otherwise.
cplx parse_complex(const std::string& s);
// Shortest round-tripping decimal form; an exactly zero imaginary part is omitted.
std::string format_complex(cplx z);
std::string format_double(double x);

// Header accompanying the matrix-market export of an assembly.
std::string assembly_header_json(const ext::ExtensionAssembly& assembly);

} // namespace saf::io
