#pragma once

#include "json.hpp"

#include "framedkit/fin.hpp"

namespace framedkit::io {

using nlohmann::json;

json setJson(const fin::FinSet& s);
json fnJson(const fin::FinFn& f);

// Workspace-facing parsers. `what` names the entity in diagnostics.
fin::FinSet parseSet(const std::string& name, const json& j, const std::string& what);
fin::FinFn parseFn(const fin::FinSet& dom, const fin::FinSet& cod, const json& map,
                   const std::string& what);
fin::FinFn parseFnEntry(const json& j, const std::string& what,
                        const std::function<fin::FinSet(const std::string&)>& resolveSet);

// User-supplied element labels must be atoms: no parentheses or commas, so
// that structured labels built from them split unambiguously.
void requireAtomLabels(const fin::FinSet& s, const std::string& what);

}  // namespace framedkit::io
