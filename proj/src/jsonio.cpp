#include "framedkit/jsonio.hpp"

namespace framedkit::io {

using fin::FinFn;
using fin::FinSet;
using fin::InputError;

json setJson(const FinSet& s) {
  return json{{"name", s.name}, {"elements", s.elems}};
}

json fnJson(const FinFn& f) {
  json map = json::object();
  for (std::size_t i = 0; i < f.dom.size(); ++i) map[f.dom.elems[i]] = f.cod.elems[f.tab[i]];
  return json{{"dom", setJson(f.dom)}, {"cod", setJson(f.cod)}, {"map", map}};
}

FinSet parseSet(const std::string& name, const json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of element labels");
  std::vector<std::string> elems;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(what + ": element labels must be strings");
    elems.push_back(e.get<std::string>());
  }
  FinSet s = fin::makeSet(name, std::move(elems));
  requireAtomLabels(s, what);
  return s;
}

FinFn parseFn(const FinSet& dom, const FinSet& cod, const json& map, const std::string& what) {
  if (!map.is_object()) throw InputError(what + ": expected an object element → element");
  for (auto it = map.begin(); it != map.end(); ++it)
    if (!dom.contains(it.key()))
      throw InputError(what + ": maps '" + it.key() + "' which is not in the domain");
  return FinFn::make(dom, cod, [&](const std::string& x) -> std::string {
    auto it = map.find(x);
    if (it == map.end()) throw InputError(what + ": no image given for '" + x + "'");
    if (!it->is_string()) throw InputError(what + ": image of '" + x + "' must be a string");
    std::string y = it->get<std::string>();
    if (!cod.contains(y))
      throw InputError(what + ": image '" + y + "' of '" + x + "' is outside the codomain");
    return y;
  });
}

FinFn parseFnEntry(const json& j, const std::string& what,
                   const std::function<FinSet(const std::string&)>& resolveSet) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("cod") || !j.contains("map"))
    throw InputError(what + ": expected {dom, cod, map}");
  if (!j["dom"].is_string() || !j["cod"].is_string())
    throw InputError(what + ": dom and cod must name sets");
  FinSet dom = resolveSet(j["dom"].get<std::string>());
  FinSet cod = resolveSet(j["cod"].get<std::string>());
  return parseFn(dom, cod, j["map"], what);
}

void requireAtomLabels(const FinSet& s, const std::string& what) {
  for (const auto& e : s.elems)
    if (e.find_first_of("(),") != std::string::npos)
      throw InputError(what + ": label '" + e + "' contains '(', ')' or ','; labels must be atoms");
}

}  // namespace framedkit::io
