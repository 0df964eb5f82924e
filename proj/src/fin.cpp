#include "framedkit/fin.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace framedkit::fin {

std::uint64_t searchBudget() {
  static const std::uint64_t cached = [] {
    if (const char* env = std::getenv("FRAMEDKIT_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t{1000000};
  }();
  return cached;
}

bool FinSet::contains(const std::string& x) const {
  return std::find(elems.begin(), elems.end(), x) != elems.end();
}

std::size_t FinSet::indexOf(const std::string& x) const {
  auto it = std::find(elems.begin(), elems.end(), x);
  if (it == elems.end()) throw InputError("set '" + name + "' has no element '" + x + "'");
  return static_cast<std::size_t>(it - elems.begin());
}

FinSet makeSet(std::string name, std::vector<std::string> elems) {
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j)
      if (elems[i] == elems[j])
        throw InputError("set '" + name + "' repeats element '" + elems[i] + "'");
  return FinSet{std::move(name), std::move(elems)};
}

FinFn FinFn::identity(const FinSet& a) {
  FinFn f{a, a, {}};
  f.tab.resize(a.size());
  std::iota(f.tab.begin(), f.tab.end(), std::size_t{0});
  return f;
}

FinFn FinFn::make(const FinSet& dom, const FinSet& cod,
                  const std::function<std::string(const std::string&)>& f) {
  FinFn fn{dom, cod, {}};
  fn.tab.reserve(dom.size());
  for (const auto& x : dom.elems) fn.tab.push_back(cod.indexOf(f(x)));
  return fn;
}

FinFn FinFn::constant(const FinSet& dom, const FinSet& cod, const std::string& value) {
  std::size_t i = cod.indexOf(value);
  FinFn fn{dom, cod, std::vector<std::size_t>(dom.size(), i)};
  return fn;
}

const std::string& FinFn::at(const std::string& x) const { return cod.elems[tab[dom.indexOf(x)]]; }

FinFn FinFn::then(const FinFn& g) const {
  if (cod != g.dom) throw InputError("composition mismatch: cod != dom");
  FinFn fn{dom, g.cod, {}};
  fn.tab.reserve(tab.size());
  for (std::size_t i : tab) fn.tab.push_back(g.tab[i]);
  return fn;
}

bool FinFn::injective() const {
  std::vector<bool> seen(cod.size(), false);
  for (std::size_t i : tab) {
    if (seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

bool FinFn::surjective() const {
  std::vector<bool> seen(cod.size(), false);
  for (std::size_t i : tab) seen[i] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

FinFn FinFn::inverse() const {
  if (!bijective()) throw InputError("inverse of a non-bijective function");
  FinFn fn{cod, dom, std::vector<std::size_t>(cod.size())};
  for (std::size_t i = 0; i < tab.size(); ++i) fn.tab[tab[i]] = i;
  return fn;
}

const std::string& QuotientMap::repOf(const std::string& x) const {
  for (const auto& cls : classes)
    if (std::find(cls.begin(), cls.end(), x) != cls.end()) return cls.front();
  throw InputError("quotient of '" + source.name + "' has no class for '" + x + "'");
}

FinSet QuotientMap::quotient() const {
  std::vector<std::string> labels;
  labels.reserve(classes.size());
  for (const auto& cls : classes) labels.push_back(classLabel(cls.front()));
  return makeSet("quot(" + source.name + ")", std::move(labels));
}

FinFn QuotientMap::projection() const {
  FinSet q = quotient();
  return FinFn::make(source, q, [&](const std::string& x) { return classLabel(repOf(x)); });
}

SpanDiagram pullback(const FinFn& f, const FinFn& g) {
  if (f.cod != g.cod) throw InputError("pullback: codomain mismatch");
  std::vector<std::string> labels;
  std::vector<std::size_t> toA, toB;
  for (std::size_t i = 0; i < f.dom.size(); ++i)
    for (std::size_t j = 0; j < g.dom.size(); ++j)
      if (f.tab[i] == g.tab[j]) {
        labels.push_back(pairLabel(f.dom.elems[i], g.dom.elems[j]));
        toA.push_back(i);
        toB.push_back(j);
      }
  FinSet apex = makeSet("pb(" + f.dom.name + "," + g.dom.name + ")", std::move(labels));
  return SpanDiagram{apex, FinFn{apex, f.dom, std::move(toA)}, FinFn{apex, g.dom, std::move(toB)}};
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

QuotientMap coequalizer(const FinFn& f, const FinFn& g) {
  if (f.dom != g.dom || f.cod != g.cod) throw InputError("coequalizer: not a parallel pair");
  UnionFind uf(f.cod.size());
  for (std::size_t i = 0; i < f.dom.size(); ++i) uf.unite(f.tab[i], g.tab[i]);
  std::vector<std::vector<std::string>> classes;
  std::vector<std::size_t> classOf(f.cod.size());
  std::vector<std::size_t> rootClass(f.cod.size(), SIZE_MAX);
  for (std::size_t i = 0; i < f.cod.size(); ++i) {
    std::size_t r = uf.find(i);
    if (rootClass[r] == SIZE_MAX) {
      rootClass[r] = classes.size();
      classes.emplace_back();
    }
    classes[rootClass[r]].push_back(f.cod.elems[i]);
  }
  return QuotientMap{f.cod, std::move(classes)};
}

SpanDiagram product(const FinSet& a, const FinSet& b) {
  std::vector<std::string> labels;
  std::vector<std::size_t> toA, toB;
  labels.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      labels.push_back(pairLabel(a.elems[i], b.elems[j]));
      toA.push_back(i);
      toB.push_back(j);
    }
  FinSet p = makeSet("prod(" + a.name + "," + b.name + ")", std::move(labels));
  return SpanDiagram{p, FinFn{p, a, std::move(toA)}, FinFn{p, b, std::move(toB)}};
}

CospanDiagram coproduct(const FinSet& a, const FinSet& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() + b.size());
  for (const auto& x : a.elems) labels.push_back(inlLabel(x));
  for (const auto& y : b.elems) labels.push_back(inrLabel(y));
  FinSet s = makeSet("sum(" + a.name + "," + b.name + ")", std::move(labels));
  std::vector<std::size_t> ia(a.size()), ib(b.size());
  std::iota(ia.begin(), ia.end(), std::size_t{0});
  std::iota(ib.begin(), ib.end(), a.size());
  return CospanDiagram{s, FinFn{a, s, std::move(ia)}, FinFn{b, s, std::move(ib)}};
}

ImageFactorization imageFactorization(const FinFn& f) {
  std::vector<bool> hit(f.cod.size(), false);
  for (std::size_t i : f.tab) hit[i] = true;
  std::vector<std::string> labels;
  std::vector<std::size_t> reindex(f.cod.size(), SIZE_MAX), incl;
  for (std::size_t i = 0; i < f.cod.size(); ++i)
    if (hit[i]) {
      reindex[i] = labels.size();
      labels.push_back(f.cod.elems[i]);
      incl.push_back(i);
    }
  FinSet image = makeSet("im(" + f.cod.name + ")", std::move(labels));
  std::vector<std::size_t> surj;
  surj.reserve(f.tab.size());
  for (std::size_t i : f.tab) surj.push_back(reindex[i]);
  return ImageFactorization{image, FinFn{f.dom, image, std::move(surj)},
                            FinFn{image, f.cod, std::move(incl)}};
}

std::optional<FinFn> findBijection(const FinSet& a, const FinSet& b,
                                   const std::vector<FnConstraint>& constraints,
                                   const std::function<bool(const FinFn&)>& accept) {
  if (a.size() != b.size()) return std::nullopt;
  const std::size_t n = a.size();

  // forced[i] = required image index, or SIZE_MAX
  std::vector<std::size_t> forced(n, SIZE_MAX);
  // pairwise admissibility from u: A→Y, v: B→Y constraints
  std::vector<std::pair<const FinFn*, const FinFn*>> outgoing;
  for (const auto& c : constraints) {
    if (c.u.cod == a && c.v.cod == b && c.u.dom == c.v.dom) {
      for (std::size_t x = 0; x < c.u.dom.size(); ++x) {
        std::size_t i = c.u.tab[x], j = c.v.tab[x];
        if (forced[i] != SIZE_MAX && forced[i] != j) return std::nullopt;
        forced[i] = j;
      }
    } else if (c.u.dom == a && c.v.dom == b && c.u.cod == c.v.cod) {
      outgoing.emplace_back(&c.u, &c.v);
    } else {
      throw InputError("findBijection: constraint endpoints match neither recognized shape");
    }
  }

  const std::uint64_t budget = searchBudget();
  std::uint64_t steps = 0;
  std::vector<std::size_t> assign(n, SIZE_MAX);
  std::vector<bool> used(n, false);

  std::function<std::optional<FinFn>(std::size_t)> dfs = [&](std::size_t i) -> std::optional<FinFn> {
    if (i == n) {
      FinFn fn{a, b, assign};
      if (accept && !accept(fn)) return std::nullopt;
      return fn;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      if (forced[i] != SIZE_MAX && forced[i] != j) continue;
      bool ok = true;
      for (auto [u, v] : outgoing)
        if (u->tab[i] != v->tab[j]) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (++steps > budget) throw BudgetError("findBijection: candidate budget exceeded");
      assign[i] = j;
      used[j] = true;
      if (auto r = dfs(i + 1)) return r;
      used[j] = false;
      assign[i] = SIZE_MAX;
    }
    return std::nullopt;
  };
  return dfs(0);
}

bool forEachFunction(const FinSet& a, const FinSet& b, const std::function<bool(const FinFn&)>& cb,
                     std::uint64_t budget) {
  if (budget == 0) budget = searchBudget();
  if (a.empty()) return cb(FinFn{a, b, {}});
  if (b.empty()) return true;  // no functions from nonempty to empty
  // overflow-safe count check
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (count > budget / b.size() + 1) count = budget + 1;
    else count *= b.size();
  }
  if (count > budget) throw BudgetError("forEachFunction: |cod|^|dom| exceeds budget");
  std::vector<std::size_t> tab(a.size(), 0);
  while (true) {
    if (!cb(FinFn{a, b, tab})) return false;
    std::size_t k = a.size();
    while (k > 0) {
      --k;
      if (++tab[k] < b.size()) break;
      tab[k] = 0;
      if (k == 0) return true;
    }
  }
}

std::vector<FinFn> allFunctions(const FinSet& a, const FinSet& b) {
  std::vector<FinFn> out;
  forEachFunction(a, b, [&](const FinFn& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

std::string pairLabel(const std::string& x, const std::string& y) {
  return "pair(" + x + "," + y + ")";
}

std::optional<std::pair<std::string, std::string>> splitPair(const std::string& label) {
  if (label.size() < 8 || label.compare(0, 5, "pair(") != 0 || label.back() != ')')
    return std::nullopt;
  int depth = 0;
  for (std::size_t i = 5; i + 1 < label.size(); ++i) {
    char c = label[i];
    if (c == '(') ++depth;
    else if (c == ')') --depth;
    else if (c == ',' && depth == 0)
      return std::make_pair(label.substr(5, i - 5), label.substr(i + 1, label.size() - i - 2));
  }
  return std::nullopt;
}

std::string inlLabel(const std::string& x) { return "inl(" + x + ")"; }
std::string inrLabel(const std::string& x) { return "inr(" + x + ")"; }
std::string classLabel(const std::string& rep) { return "class(" + rep + ")"; }

std::string taggedLabel(const std::string& tag, const std::string& inner) {
  return tag + "(" + inner + ")";
}

std::optional<std::string> stripTag(const std::string& tag, const std::string& label) {
  if (label.size() < tag.size() + 2 || label.compare(0, tag.size(), tag) != 0) return std::nullopt;
  if (label[tag.size()] != '(' || label.back() != ')') return std::nullopt;
  return label.substr(tag.size() + 1, label.size() - tag.size() - 2);
}

}  // namespace framedkit::fin
