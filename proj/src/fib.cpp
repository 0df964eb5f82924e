#include "framedkit/fib.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "framedkit/jsonio.hpp"
#include "framedkit/mat.hpp"
#include "framedkit/span.hpp"

namespace framedkit::fib {

using fin::BudgetError;
using fin::InputError;

const FinSet& terminalSet() {
  static const FinSet t = fin::makeSet("terminal", {"star"});
  return t;
}

namespace {

template <typename T>
const T& unwrap(const std::any& a, const char* what) {
  const T* p = std::any_cast<T>(&a);
  if (!p) throw InputError(std::string("expected ") + what);
  return *p;
}

FinSet prodSet(const FinSet& a, const FinSet& b) { return fin::product(a, b).apex; }

FinFn fnByIndex(const FinSet& dom, const FinSet& cod,
                const std::function<std::size_t(std::size_t)>& h) {
  std::vector<std::size_t> tab(dom.size());
  for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = h(i);
  return FinFn{dom, cod, std::move(tab)};
}

FinFn prodFn(const FinFn& f, const FinFn& g) {
  fin::SpanDiagram d = fin::product(f.dom, g.dom);
  FinSet cod = prodSet(f.cod, g.cod);
  std::vector<std::size_t> tab(d.apex.size());
  for (std::size_t i = 0; i < tab.size(); ++i)
    tab[i] = f.tab[d.p1.tab[i]] * g.cod.size() + g.tab[d.p2.tab[i]];
  return FinFn{d.apex, std::move(cod), std::move(tab)};
}

FinFn diagFn(const FinSet& a) {
  return fnByIndex(a, prodSet(a, a), [&](std::size_t i) { return i * a.size() + i; });
}

FinFn toTerminal(const FinSet& a) { return FinFn::constant(a, terminalSet(), "star"); }

// the canonical relabeling between sets of equal size
FinFn iotaFn(const FinSet& dom, const FinSet& cod) {
  if (dom.size() != cod.size())
    throw InputError("internal reindexing between sets of different sizes");
  std::vector<std::size_t> tab(dom.size());
  for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = i;
  return FinFn{dom, cod, std::move(tab)};
}

// enumerate all choice vectors (one candidate per position) with a budget
// guard; cb returns false to stop, and odometer then reports false too
bool odometer(const std::vector<std::vector<std::size_t>>& allowed,
              const std::function<bool(const std::vector<std::size_t>&)>& cb,
              const std::string& what) {
  for (const auto& c : allowed)
    if (c.empty()) return true;
  const std::uint64_t budget = fin::searchBudget();
  std::uint64_t count = 1;
  for (const auto& c : allowed) {
    if (count > budget / std::max<std::size_t>(c.size(), 1))
      throw BudgetError(what + ": enumeration exceeds the search budget");
    count *= c.size();
  }
  std::vector<std::size_t> pick(allowed.size(), 0);
  while (true) {
    std::vector<std::size_t> cur(allowed.size());
    for (std::size_t i = 0; i < allowed.size(); ++i) cur[i] = allowed[i][pick[i]];
    if (!cb(cur)) return false;
    std::size_t pos = 0;
    while (pos < allowed.size()) {
      if (++pick[pos] < allowed[pos].size()) break;
      pick[pos] = 0;
      ++pos;
    }
    if (pos == allowed.size()) return true;
  }
}

// ---------------------------------------------------------------------------
// the arrow fibration
// ---------------------------------------------------------------------------

class ArrFibration final : public Fibration {
 public:
  std::string name() const override { return "arr"; }

  bool totEq(const TotObj& a, const TotObj& b) const override { return obj(a) == obj(b); }

  bool arrEq(const TotArr& a, const TotArr& b) const override {
    return obj(a.src) == obj(b.src) && obj(a.tgt) == obj(b.tgt) && a.base == b.base &&
           fn(a) == fn(b);
  }

  const FinSet& baseOf(const TotObj& m) const override { return obj(m).base; }

  TotArr idArr(const TotObj& m) const override {
    return TotArr{FinFn::identity(obj(m).total), m, m, FinFn::identity(obj(m).base)};
  }

  TotArr compose(const TotArr& a, const TotArr& b) const override {
    if (!totEq(a.tgt, b.src))
      throw InputError("arrow composition: the endpoints do not match");
    return TotArr{fn(a).then(fn(b)), a.src, b.tgt, a.base.then(b.base)};
  }

  TotArr cartesianLift(const FinFn& f, const TotObj& m) const override {
    const ArrObject& mm = obj(m);
    if (f.cod != mm.base)
      throw InputError("cartesian lift: the arrow does not target the object's base");
    if (f == FinFn::identity(mm.base)) return idArr(m);
    fin::SpanDiagram pb = fin::pullback(f, mm.proj);
    TotObj src{ArrObject{pb.apex, f.dom, pb.p1}};
    return TotArr{pb.p2, std::move(src), m, f};
  }

  TotArr opcartesianLift(const FinFn& f, const TotObj& m) const override {
    const ArrObject& mm = obj(m);
    if (f.dom != mm.base)
      throw InputError("opcartesian lift: the arrow does not start at the object's base");
    if (f == FinFn::identity(mm.base)) return idArr(m);
    TotObj tgt{ArrObject{mm.total, f.cod, mm.proj.then(f)}};
    return TotArr{FinFn::identity(mm.total), m, std::move(tgt), f};
  }

  TotArr factorCart(const TotArr& cart, const TotArr& cand, const FinFn& u) const override {
    if (!totEq(cart.tgt, cand.tgt))
      throw InputError("cartesian factorization: the arrows do not share a target");
    if (cand.base != u.then(cart.base))
      throw InputError("cartesian factorization: the base triangle does not commute");
    const ArrObject& w = obj(cart.src);
    const ArrObject& x = obj(cand.src);
    const FinFn& theta = fn(cart);
    const FinFn& psi = fn(cand);
    std::vector<std::size_t> tab(x.total.size());
    for (std::size_t i = 0; i < tab.size(); ++i) {
      std::size_t hits = 0, found = 0;
      for (std::size_t j = 0; j < w.total.size(); ++j) {
        if (theta.tab[j] != psi.tab[i]) continue;
        if (w.proj.tab[j] != u.tab[x.proj.tab[i]]) continue;
        found = j;
        ++hits;
      }
      if (hits != 1)
        throw InputError("cartesian factorization: no unique filler over the base");
      tab[i] = found;
    }
    return TotArr{FinFn{x.total, w.total, std::move(tab)}, cand.src, cart.src, u};
  }

  TotArr factorOpcart(const TotArr& opcart, const TotArr& cand, const FinFn& u) const override {
    if (!totEq(opcart.src, cand.src))
      throw InputError("opcartesian factorization: the arrows do not share a source");
    if (cand.base != opcart.base.then(u))
      throw InputError("opcartesian factorization: the base triangle does not commute");
    const ArrObject& w = obj(opcart.tgt);
    const ArrObject& x = obj(cand.tgt);
    const FinFn& theta = fn(opcart);
    const FinFn& psi = fn(cand);
    const std::size_t none = x.total.size() + 1;
    std::vector<std::size_t> tab(w.total.size(), none);
    for (std::size_t i = 0; i < theta.tab.size(); ++i) {
      std::size_t j = theta.tab[i];
      if (tab[j] != none && tab[j] != psi.tab[i])
        throw InputError("opcartesian factorization: no unique filler over the base");
      tab[j] = psi.tab[i];
    }
    for (std::size_t j = 0; j < tab.size(); ++j)
      if (tab[j] == none)
        throw InputError("opcartesian factorization: no unique filler over the base");
    return TotArr{FinFn{w.total, x.total, std::move(tab)}, opcart.tgt, cand.tgt, u};
  }

  bool isCartesian(const TotArr& a) const override {
    const ArrObject& s = obj(a.src);
    const ArrObject& t = obj(a.tgt);
    std::size_t pbCount = 0;
    for (std::size_t i = 0; i < s.base.size(); ++i)
      for (std::size_t j = 0; j < t.total.size(); ++j)
        if (a.base.tab[i] == t.proj.tab[j]) ++pbCount;
    if (pbCount != s.total.size()) return false;
    const FinFn& m = fn(a);
    std::vector<char> hit(s.base.size() * t.total.size(), 0);
    for (std::size_t i = 0; i < s.total.size(); ++i) {
      std::size_t code = s.proj.tab[i] * t.total.size() + m.tab[i];
      if (hit[code]) return false;
      hit[code] = 1;
    }
    return true;
  }

  bool isOpcartesian(const TotArr& a) const override { return fn(a).bijective(); }

  std::optional<TotArr> invertArr(const TotArr& a) const override {
    if (!a.base.bijective() || !fn(a).bijective()) return std::nullopt;
    return TotArr{fn(a).inverse(), a.tgt, a.src, a.base.inverse()};
  }

  json invertibilityWitness(const TotArr& a) const override {
    json w = json::object();
    if (!a.base.bijective()) {
      w["reason"] = "the base arrow is not invertible";
      return w;
    }
    const FinFn& m = fn(a);
    if (m.bijective()) return w;
    const ArrObject& t = obj(a.tgt);
    const ArrObject& s = obj(a.src);
    for (std::size_t j = 0; j < t.total.size(); ++j) {
      json pre = json::array();
      for (std::size_t i = 0; i < m.tab.size(); ++i)
        if (m.tab[i] == j) pre.push_back(s.total.elems[i]);
      if (pre.size() != 1) {
        w["reason"] = "the total map is not invertible";
        w["element"] = t.total.elems[j];
        w["preimages"] = pre;
        return w;
      }
    }
    return w;
  }

  TotObj unitObj() const override {
    return TotObj{ArrObject{terminalSet(), terminalSet(), FinFn::identity(terminalSet())}};
  }

  TotObj tensorObj(const TotObj& m, const TotObj& n) const override {
    const ArrObject& mm = obj(m);
    const ArrObject& nn = obj(n);
    return TotObj{ArrObject{prodSet(mm.total, nn.total), prodSet(mm.base, nn.base),
                            prodFn(mm.proj, nn.proj)}};
  }

  TotArr tensorArr(const TotArr& a, const TotArr& b) const override {
    return TotArr{prodFn(fn(a), fn(b)), tensorObj(a.src, b.src), tensorObj(a.tgt, b.tgt),
                  prodFn(a.base, b.base)};
  }

  TotArr tensorAssoc(const TotObj& m, const TotObj& n, const TotObj& p) const override {
    TotObj lhs = tensorObj(tensorObj(m, n), p);
    TotObj rhs = tensorObj(m, tensorObj(n, p));
    const ArrObject& l = obj(lhs);
    const ArrObject& r = obj(rhs);
    FinFn tot = iotaFn(l.total, r.total);
    FinFn bas = iotaFn(l.base, r.base);
    return TotArr{std::move(tot), std::move(lhs), std::move(rhs), std::move(bas)};
  }

  TotArr tensorLunit(const TotObj& m) const override {
    TotObj lhs = tensorObj(unitObj(), m);
    const ArrObject& l = obj(lhs);
    const ArrObject& mm = obj(m);
    FinFn tot = iotaFn(l.total, mm.total);
    FinFn bas = iotaFn(l.base, mm.base);
    return TotArr{std::move(tot), std::move(lhs), m, std::move(bas)};
  }

  TotArr tensorRunit(const TotObj& m) const override {
    TotObj lhs = tensorObj(m, unitObj());
    const ArrObject& l = obj(lhs);
    const ArrObject& mm = obj(m);
    FinFn tot = iotaFn(l.total, mm.total);
    FinFn bas = iotaFn(l.base, mm.base);
    return TotArr{std::move(tot), std::move(lhs), m, std::move(bas)};
  }

  TotArr coeqArr(const TotArr& a, const TotArr& b) const override {
    if (!totEq(a.src, b.src) || !totEq(a.tgt, b.tgt))
      throw InputError("coequalizer: the arrows are not parallel");
    const ArrObject& t = obj(a.tgt);
    if (a.base != FinFn::identity(t.base) || b.base != a.base)
      throw InputError("coequalizer: the arrows must lie over an identity");
    fin::QuotientMap q = fin::coequalizer(fn(a), fn(b));
    FinSet quot = q.quotient();
    std::vector<std::size_t> ptab(q.classes.size());
    for (std::size_t c = 0; c < q.classes.size(); ++c) {
      std::size_t bp = t.proj.tab[t.total.indexOf(q.classes[c].front())];
      for (const std::string& lbl : q.classes[c])
        if (t.proj.tab[t.total.indexOf(lbl)] != bp)
          throw InputError("coequalizer: the projection does not descend to the quotient");
      ptab[c] = bp;
    }
    TotObj quotObj{ArrObject{quot, t.base, FinFn{quot, t.base, std::move(ptab)}}};
    return TotArr{q.projection(), a.tgt, std::move(quotObj), FinFn::identity(t.base)};
  }

  std::optional<TotArr> factorCoeq(const TotArr& proj, const TotArr& cand,
                                   const FinFn& u) const override {
    if (!totEq(proj.src, cand.src))
      throw InputError("coequalizer factorization: the arrows do not share a source");
    if (cand.base != proj.base.then(u))
      throw InputError("coequalizer factorization: the base triangle does not commute");
    const ArrObject& q = obj(proj.tgt);
    const ArrObject& x = obj(cand.tgt);
    const FinFn& p = fn(proj);
    const FinFn& psi = fn(cand);
    const std::size_t none = x.total.size() + 1;
    std::vector<std::size_t> tab(q.total.size(), none);
    for (std::size_t i = 0; i < p.tab.size(); ++i) {
      std::size_t c = p.tab[i];
      if (tab[c] != none && tab[c] != psi.tab[i]) return std::nullopt;
      tab[c] = psi.tab[i];
    }
    for (std::size_t c = 0; c < tab.size(); ++c)
      if (tab[c] == none) return std::nullopt;
    return TotArr{FinFn{q.total, x.total, std::move(tab)}, proj.tgt, cand.tgt, u};
  }

  std::optional<TotArr> findIso(const TotObj& src, const TotObj& tgt) const override {
    const ArrObject& s = obj(src);
    const ArrObject& t = obj(tgt);
    if (s.base != t.base) return std::nullopt;
    std::optional<FinFn> b = fin::findBijection(s.total, t.total, {{s.proj, t.proj}});
    if (!b) return std::nullopt;
    return TotArr{*b, src, tgt, FinFn::identity(s.base)};
  }

  void forEachArr(const TotObj& src, const TotObj& tgt, const FinFn& base,
                  const std::function<bool(const TotArr&)>& cb) const override {
    const ArrObject& s = obj(src);
    const ArrObject& t = obj(tgt);
    if (base.dom != s.base || base.cod != t.base)
      throw InputError("arrow enumeration: the base arrow does not match the objects");
    std::vector<std::vector<std::size_t>> allowed(s.total.size());
    for (std::size_t i = 0; i < allowed.size(); ++i) {
      std::size_t want = base.tab[s.proj.tab[i]];
      for (std::size_t j = 0; j < t.total.size(); ++j)
        if (t.proj.tab[j] == want) allowed[i].push_back(j);
    }
    odometer(
        allowed,
        [&](const std::vector<std::size_t>& pick) {
          return cb(TotArr{FinFn{s.total, t.total, pick}, src, tgt, base});
        },
        "arrow enumeration");
  }

  TotObj sampleTot(fin::Rng& rng, const FinSet& base, std::size_t maxSize) const override {
    std::size_t n = base.size() == 0 ? 0 : rng.below(maxSize + 1);
    std::size_t id = rng.below(10000);
    std::vector<std::string> elems;
    elems.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      elems.push_back("t" + std::to_string(i) + "_" + std::to_string(id));
    FinSet total = fin::makeSet("T" + std::to_string(id), std::move(elems));
    std::vector<std::size_t> tab(n);
    for (auto& v : tab) v = rng.below(base.size());
    FinFn proj{total, base, std::move(tab)};
    return TotObj{ArrObject{std::move(total), base, std::move(proj)}};
  }

  std::optional<TotArr> sampleArr(fin::Rng& rng, const TotObj& src, const TotObj& tgt,
                                  const FinFn& base) const override {
    const ArrObject& s = obj(src);
    const ArrObject& t = obj(tgt);
    if (base.dom != s.base || base.cod != t.base)
      throw InputError("arrow sampling: the base arrow does not match the objects");
    std::vector<std::size_t> tab(s.total.size());
    for (std::size_t i = 0; i < tab.size(); ++i) {
      std::vector<std::size_t> cand;
      std::size_t want = base.tab[s.proj.tab[i]];
      for (std::size_t j = 0; j < t.total.size(); ++j)
        if (t.proj.tab[j] == want) cand.push_back(j);
      if (cand.empty()) return std::nullopt;
      tab[i] = cand[rng.below(cand.size())];
    }
    return TotArr{FinFn{s.total, t.total, std::move(tab)}, src, tgt, base};
  }

  json totJson(const TotObj& m) const override {
    const ArrObject& mm = obj(m);
    return json{{"total", io::setJson(mm.total)},
                {"base", io::setJson(mm.base)},
                {"projection", io::fnJson(mm.proj)}};
  }

  json arrJson(const TotArr& a) const override {
    return json{{"src", totJson(a.src)},
                {"tgt", totJson(a.tgt)},
                {"base", io::fnJson(a.base)},
                {"map", io::fnJson(fn(a))}};
  }

 private:
  static const ArrObject& obj(const TotObj& m) {
    return unwrap<ArrObject>(m.v, "an object of the arrow fibration");
  }
  static const FinFn& fn(const TotArr& a) {
    return unwrap<FinFn>(a.v, "an arrow of the arrow fibration");
  }
};

// ---------------------------------------------------------------------------
// the family fibration
// ---------------------------------------------------------------------------

class FamFibration final : public Fibration {
 public:
  std::string name() const override { return "fam"; }

  bool totEq(const TotObj& a, const TotObj& b) const override { return obj(a) == obj(b); }

  bool arrEq(const TotArr& a, const TotArr& b) const override {
    return obj(a.src) == obj(b.src) && obj(a.tgt) == obj(b.tgt) && a.base == b.base &&
           maps(a) == maps(b);
  }

  const FinSet& baseOf(const TotObj& m) const override { return obj(m).index; }

  TotArr idArr(const TotObj& m) const override {
    const FamObject& mm = obj(m);
    std::vector<FinFn> comps;
    comps.reserve(mm.fibers.size());
    for (const FinSet& f : mm.fibers) comps.push_back(FinFn::identity(f));
    return TotArr{std::move(comps), m, m, FinFn::identity(mm.index)};
  }

  TotArr compose(const TotArr& a, const TotArr& b) const override {
    if (!totEq(a.tgt, b.src))
      throw InputError("arrow composition: the endpoints do not match");
    const std::vector<FinFn>& am = maps(a);
    const std::vector<FinFn>& bm = maps(b);
    std::vector<FinFn> comps;
    comps.reserve(am.size());
    for (std::size_t i = 0; i < am.size(); ++i)
      comps.push_back(am[i].then(bm[a.base.tab[i]]));
    return TotArr{std::move(comps), a.src, b.tgt, a.base.then(b.base)};
  }

  TotArr cartesianLift(const FinFn& f, const TotObj& m) const override {
    const FamObject& mm = obj(m);
    if (f.cod != mm.index)
      throw InputError("cartesian lift: the arrow does not target the object's base");
    if (f == FinFn::identity(mm.index)) return idArr(m);
    std::vector<FinSet> fibers;
    std::vector<FinFn> comps;
    fibers.reserve(f.dom.size());
    comps.reserve(f.dom.size());
    for (std::size_t i = 0; i < f.dom.size(); ++i) {
      fibers.push_back(mm.fibers[f.tab[i]]);
      comps.push_back(FinFn::identity(mm.fibers[f.tab[i]]));
    }
    TotObj src{FamObject{f.dom, std::move(fibers)}};
    return TotArr{std::move(comps), std::move(src), m, f};
  }

  TotArr opcartesianLift(const FinFn& f, const TotObj& m) const override {
    const FamObject& mm = obj(m);
    if (f.dom != mm.index)
      throw InputError("opcartesian lift: the arrow does not start at the object's base");
    if (f == FinFn::identity(mm.index)) return idArr(m);
    // fiber over b: the disjoint union of the fibers f sends to b
    std::vector<FinSet> fibers;
    fibers.reserve(f.cod.size());
    for (std::size_t b = 0; b < f.cod.size(); ++b) {
      std::vector<std::string> elems;
      for (std::size_t a = 0; a < f.dom.size(); ++a) {
        if (f.tab[a] != b) continue;
        for (const std::string& x : mm.fibers[a].elems)
          elems.push_back(mat::sumLabel(mm.index.elems[a], x));
      }
      fibers.push_back(fin::makeSet("sum", std::move(elems)));
    }
    std::vector<FinFn> comps;
    comps.reserve(f.dom.size());
    for (std::size_t a = 0; a < f.dom.size(); ++a) {
      const FinSet& tgtFiber = fibers[f.tab[a]];
      std::vector<std::size_t> tab(mm.fibers[a].size());
      for (std::size_t x = 0; x < tab.size(); ++x)
        tab[x] = tgtFiber.indexOf(mat::sumLabel(mm.index.elems[a], mm.fibers[a].elems[x]));
      comps.push_back(FinFn{mm.fibers[a], tgtFiber, std::move(tab)});
    }
    TotObj tgt{FamObject{f.cod, std::move(fibers)}};
    return TotArr{std::move(comps), m, std::move(tgt), f};
  }

  TotArr factorCart(const TotArr& cart, const TotArr& cand, const FinFn& u) const override {
    if (!totEq(cart.tgt, cand.tgt))
      throw InputError("cartesian factorization: the arrows do not share a target");
    if (cand.base != u.then(cart.base))
      throw InputError("cartesian factorization: the base triangle does not commute");
    const FamObject& w = obj(cart.src);
    const FamObject& x = obj(cand.src);
    const std::vector<FinFn>& theta = maps(cart);
    const std::vector<FinFn>& psi = maps(cand);
    std::vector<FinFn> comps;
    comps.reserve(x.fibers.size());
    for (std::size_t i = 0; i < x.fibers.size(); ++i) {
      const FinFn& th = theta[u.tab[i]];
      if (!th.bijective())
        throw InputError("cartesian factorization: no unique filler over the base");
      comps.push_back(psi[i].then(th.inverse()));
    }
    (void)w;
    return TotArr{std::move(comps), cand.src, cart.src, u};
  }

  TotArr factorOpcart(const TotArr& opcart, const TotArr& cand, const FinFn& u) const override {
    if (!totEq(opcart.src, cand.src))
      throw InputError("opcartesian factorization: the arrows do not share a source");
    if (cand.base != opcart.base.then(u))
      throw InputError("opcartesian factorization: the base triangle does not commute");
    const FamObject& m = obj(opcart.src);
    const FamObject& w = obj(opcart.tgt);
    const FamObject& x = obj(cand.tgt);
    const std::vector<FinFn>& theta = maps(opcart);
    const std::vector<FinFn>& psi = maps(cand);
    std::vector<FinFn> comps;
    comps.reserve(w.fibers.size());
    for (std::size_t b = 0; b < w.fibers.size(); ++b) {
      const FinSet& tgtFiber = x.fibers[u.tab[b]];
      const std::size_t none = tgtFiber.size() + 1;
      std::vector<std::size_t> tab(w.fibers[b].size(), none);
      for (std::size_t a = 0; a < m.fibers.size(); ++a) {
        if (opcart.base.tab[a] != b) continue;
        for (std::size_t i = 0; i < m.fibers[a].size(); ++i) {
          std::size_t j = theta[a].tab[i];
          if (tab[j] != none && tab[j] != psi[a].tab[i])
            throw InputError("opcartesian factorization: no unique filler over the base");
          tab[j] = psi[a].tab[i];
        }
      }
      for (std::size_t j = 0; j < tab.size(); ++j)
        if (tab[j] == none)
          throw InputError("opcartesian factorization: no unique filler over the base");
      comps.push_back(FinFn{w.fibers[b], tgtFiber, std::move(tab)});
    }
    return TotArr{std::move(comps), opcart.tgt, cand.tgt, u};
  }

  bool isCartesian(const TotArr& a) const override {
    for (const FinFn& c : maps(a))
      if (!c.bijective()) return false;
    return true;
  }

  bool isOpcartesian(const TotArr& a) const override {
    const FamObject& s = obj(a.src);
    const FamObject& t = obj(a.tgt);
    const std::vector<FinFn>& comps = maps(a);
    for (std::size_t b = 0; b < t.fibers.size(); ++b) {
      std::vector<char> hit(t.fibers[b].size(), 0);
      std::size_t incoming = 0;
      for (std::size_t i = 0; i < s.fibers.size(); ++i) {
        if (a.base.tab[i] != b) continue;
        incoming += s.fibers[i].size();
        for (std::size_t x = 0; x < s.fibers[i].size(); ++x) {
          std::size_t j = comps[i].tab[x];
          if (hit[j]) return false;
          hit[j] = 1;
        }
      }
      if (incoming != t.fibers[b].size()) return false;
    }
    return true;
  }

  std::optional<TotArr> invertArr(const TotArr& a) const override {
    if (!a.base.bijective()) return std::nullopt;
    const std::vector<FinFn>& comps = maps(a);
    for (const FinFn& c : comps)
      if (!c.bijective()) return std::nullopt;
    FinFn binv = a.base.inverse();
    std::vector<FinFn> inv;
    inv.reserve(comps.size());
    for (std::size_t b = 0; b < binv.dom.size(); ++b) inv.push_back(comps[binv.tab[b]].inverse());
    return TotArr{std::move(inv), a.tgt, a.src, std::move(binv)};
  }

  json invertibilityWitness(const TotArr& a) const override {
    json w = json::object();
    if (!a.base.bijective()) {
      w["reason"] = "the base arrow is not invertible";
      return w;
    }
    const FamObject& s = obj(a.src);
    const FamObject& t = obj(a.tgt);
    const std::vector<FinFn>& comps = maps(a);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i].bijective()) continue;
      const FinSet& tgtFiber = t.fibers[a.base.tab[i]];
      for (std::size_t j = 0; j < tgtFiber.size(); ++j) {
        json pre = json::array();
        for (std::size_t x = 0; x < comps[i].tab.size(); ++x)
          if (comps[i].tab[x] == j) pre.push_back(s.fibers[i].elems[x]);
        if (pre.size() != 1) {
          w["reason"] = "a fiber component is not invertible";
          w["index"] = s.index.elems[i];
          w["element"] = tgtFiber.elems[j];
          w["preimages"] = pre;
          return w;
        }
      }
    }
    return w;
  }

  TotObj unitObj() const override {
    return TotObj{FamObject{terminalSet(), {terminalSet()}}};
  }

  TotObj tensorObj(const TotObj& m, const TotObj& n) const override {
    const FamObject& mm = obj(m);
    const FamObject& nn = obj(n);
    std::vector<FinSet> fibers;
    fibers.reserve(mm.fibers.size() * nn.fibers.size());
    for (const FinSet& a : mm.fibers)
      for (const FinSet& b : nn.fibers) fibers.push_back(prodSet(a, b));
    return TotObj{FamObject{prodSet(mm.index, nn.index), std::move(fibers)}};
  }

  TotArr tensorArr(const TotArr& a, const TotArr& b) const override {
    const std::vector<FinFn>& am = maps(a);
    const std::vector<FinFn>& bm = maps(b);
    std::vector<FinFn> comps;
    comps.reserve(am.size() * bm.size());
    for (const FinFn& f : am)
      for (const FinFn& g : bm) comps.push_back(prodFn(f, g));
    return TotArr{std::move(comps), tensorObj(a.src, b.src), tensorObj(a.tgt, b.tgt),
                  prodFn(a.base, b.base)};
  }

  TotArr tensorAssoc(const TotObj& m, const TotObj& n, const TotObj& p) const override {
    TotObj lhs = tensorObj(tensorObj(m, n), p);
    TotObj rhs = tensorObj(m, tensorObj(n, p));
    return relabelArr(std::move(lhs), std::move(rhs));
  }

  TotArr tensorLunit(const TotObj& m) const override {
    return relabelArr(tensorObj(unitObj(), m), m);
  }

  TotArr tensorRunit(const TotObj& m) const override {
    return relabelArr(tensorObj(m, unitObj()), m);
  }

  TotArr coeqArr(const TotArr& a, const TotArr& b) const override {
    if (!totEq(a.src, b.src) || !totEq(a.tgt, b.tgt))
      throw InputError("coequalizer: the arrows are not parallel");
    const FamObject& t = obj(a.tgt);
    if (a.base != FinFn::identity(t.index) || b.base != a.base)
      throw InputError("coequalizer: the arrows must lie over an identity");
    const std::vector<FinFn>& am = maps(a);
    const std::vector<FinFn>& bm = maps(b);
    std::vector<FinSet> fibers;
    std::vector<FinFn> comps;
    fibers.reserve(t.fibers.size());
    comps.reserve(t.fibers.size());
    for (std::size_t i = 0; i < t.fibers.size(); ++i) {
      fin::QuotientMap q = fin::coequalizer(am[i], bm[i]);
      fibers.push_back(q.quotient());
      comps.push_back(q.projection());
    }
    TotObj quot{FamObject{t.index, std::move(fibers)}};
    return TotArr{std::move(comps), a.tgt, std::move(quot), FinFn::identity(t.index)};
  }

  std::optional<TotArr> factorCoeq(const TotArr& proj, const TotArr& cand,
                                   const FinFn& u) const override {
    if (!totEq(proj.src, cand.src))
      throw InputError("coequalizer factorization: the arrows do not share a source");
    if (cand.base != proj.base.then(u))
      throw InputError("coequalizer factorization: the base triangle does not commute");
    const FamObject& q = obj(proj.tgt);
    const FamObject& x = obj(cand.tgt);
    const std::vector<FinFn>& p = maps(proj);
    const std::vector<FinFn>& psi = maps(cand);
    std::vector<FinFn> comps;
    comps.reserve(q.fibers.size());
    for (std::size_t b = 0; b < q.fibers.size(); ++b) {
      const FinSet& tgtFiber = x.fibers[u.tab[b]];
      const std::size_t none = tgtFiber.size() + 1;
      std::vector<std::size_t> tab(q.fibers[b].size(), none);
      for (std::size_t i = 0; i < p[b].tab.size(); ++i) {
        std::size_t c = p[b].tab[i];
        if (tab[c] != none && tab[c] != psi[b].tab[i]) return std::nullopt;
        tab[c] = psi[b].tab[i];
      }
      for (std::size_t c = 0; c < tab.size(); ++c)
        if (tab[c] == none) return std::nullopt;
      comps.push_back(FinFn{q.fibers[b], tgtFiber, std::move(tab)});
    }
    return TotArr{std::move(comps), proj.tgt, cand.tgt, u};
  }

  std::optional<TotArr> findIso(const TotObj& src, const TotObj& tgt) const override {
    const FamObject& s = obj(src);
    const FamObject& t = obj(tgt);
    if (s.index != t.index) return std::nullopt;
    std::vector<FinFn> comps;
    comps.reserve(s.fibers.size());
    for (std::size_t i = 0; i < s.fibers.size(); ++i) {
      std::optional<FinFn> b = fin::findBijection(s.fibers[i], t.fibers[i]);
      if (!b) return std::nullopt;
      comps.push_back(std::move(*b));
    }
    return TotArr{std::move(comps), src, tgt, FinFn::identity(s.index)};
  }

  void forEachArr(const TotObj& src, const TotObj& tgt, const FinFn& base,
                  const std::function<bool(const TotArr&)>& cb) const override {
    const FamObject& s = obj(src);
    const FamObject& t = obj(tgt);
    if (base.dom != s.index || base.cod != t.index)
      throw InputError("arrow enumeration: the base arrow does not match the objects");
    // flatten (fiber, element) positions
    std::vector<std::pair<std::size_t, std::size_t>> pos;
    for (std::size_t i = 0; i < s.fibers.size(); ++i)
      for (std::size_t x = 0; x < s.fibers[i].size(); ++x) pos.emplace_back(i, x);
    std::vector<std::vector<std::size_t>> allowed(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const FinSet& tgtFiber = t.fibers[base.tab[pos[k].first]];
      for (std::size_t j = 0; j < tgtFiber.size(); ++j) allowed[k].push_back(j);
    }
    odometer(
        allowed,
        [&](const std::vector<std::size_t>& pick) {
          std::vector<FinFn> comps;
          comps.reserve(s.fibers.size());
          std::size_t k = 0;
          for (std::size_t i = 0; i < s.fibers.size(); ++i) {
            std::vector<std::size_t> tab(s.fibers[i].size());
            for (std::size_t x = 0; x < tab.size(); ++x) tab[x] = pick[k++];
            comps.push_back(FinFn{s.fibers[i], t.fibers[base.tab[i]], std::move(tab)});
          }
          return cb(TotArr{std::move(comps), src, tgt, base});
        },
        "arrow enumeration");
  }

  TotObj sampleTot(fin::Rng& rng, const FinSet& base, std::size_t maxSize) const override {
    std::size_t id = rng.below(10000);
    std::vector<FinSet> fibers;
    fibers.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      std::size_t n = rng.below(maxSize + 1);
      std::vector<std::string> elems;
      elems.reserve(n);
      for (std::size_t x = 0; x < n; ++x)
        elems.push_back("v" + std::to_string(i) + "_" + std::to_string(x) + "_" +
                        std::to_string(id));
      fibers.push_back(fin::makeSet("F" + std::to_string(i) + "_" + std::to_string(id),
                                    std::move(elems)));
    }
    return TotObj{FamObject{base, std::move(fibers)}};
  }

  std::optional<TotArr> sampleArr(fin::Rng& rng, const TotObj& src, const TotObj& tgt,
                                  const FinFn& base) const override {
    const FamObject& s = obj(src);
    const FamObject& t = obj(tgt);
    if (base.dom != s.index || base.cod != t.index)
      throw InputError("arrow sampling: the base arrow does not match the objects");
    std::vector<FinFn> comps;
    comps.reserve(s.fibers.size());
    for (std::size_t i = 0; i < s.fibers.size(); ++i) {
      const FinSet& tgtFiber = t.fibers[base.tab[i]];
      if (tgtFiber.size() == 0 && s.fibers[i].size() != 0) return std::nullopt;
      std::vector<std::size_t> tab(s.fibers[i].size());
      for (auto& v : tab) v = rng.below(tgtFiber.size());
      comps.push_back(FinFn{s.fibers[i], tgtFiber, std::move(tab)});
    }
    return TotArr{std::move(comps), src, tgt, base};
  }

  json totJson(const TotObj& m) const override {
    const FamObject& mm = obj(m);
    json fibers = json::array();
    for (const FinSet& f : mm.fibers) fibers.push_back(io::setJson(f));
    return json{{"index", io::setJson(mm.index)}, {"fibers", fibers}};
  }

  json arrJson(const TotArr& a) const override {
    json comps = json::array();
    for (const FinFn& c : maps(a)) comps.push_back(io::fnJson(c));
    return json{{"src", totJson(a.src)},
                {"tgt", totJson(a.tgt)},
                {"base", io::fnJson(a.base)},
                {"components", comps}};
  }

 private:
  static const FamObject& obj(const TotObj& m) {
    return unwrap<FamObject>(m.v, "an object of the family fibration");
  }
  static const std::vector<FinFn>& maps(const TotArr& a) {
    return unwrap<std::vector<FinFn>>(a.v, "an arrow of the family fibration");
  }

  // the structural bijection between fiberwise-identified objects (used for
  // the tensor constraints, whose fibers agree position by position)
  TotArr relabelArr(TotObj lhs, TotObj rhs) const {
    const FamObject& l = obj(lhs);
    const FamObject& r = obj(rhs);
    std::vector<FinFn> comps;
    comps.reserve(l.fibers.size());
    for (std::size_t i = 0; i < l.fibers.size(); ++i)
      comps.push_back(iotaFn(l.fibers[i], r.fibers[i]));
    FinFn base = iotaFn(l.index, r.index);
    return TotArr{std::move(comps), std::move(lhs), std::move(rhs), std::move(base)};
  }
};

// ---------------------------------------------------------------------------
// shared construction helpers
// ---------------------------------------------------------------------------

// π^*I together with its pushforward along g: the "free" cell on g
struct FreeCellParts {
  TotArr fromI;   // P → I, cartesian over the terminal arrow
  TotArr opcart;  // P → cell, opcartesian over g
};

FreeCellParts freeCellParts(const Fibration& phi, const FinFn& g) {
  TotArr c = phi.cartesianLift(toTerminal(g.dom), phi.unitObj());
  TotArr o = phi.opcartesianLift(g, c.src);
  return {std::move(c), std::move(o)};
}

// a map of free cells, induced by q on generators and lying over w
// (requires q then g' = g then w)
TotArr freeMapArr(const Fibration& phi, const FreeCellParts& from, const FreeCellParts& to,
                  const FinFn& q, const FinFn& w) {
  TotArr s1 = phi.factorCart(to.fromI, from.fromI, q);
  return phi.factorOpcart(from.opcart, phi.compose(s1, to.opcart), w);
}

// the data of a horizontal composite M⊙N: the tensor M⊗N, the cartesian
// restriction along the diagonal inclusion δ: A×B×C → (A×B)×(B×C), and the
// opcartesian pushforward along the projection π: A×B×C → A×C
struct CompParts {
  TotObj tens;    // M⊗N
  TotArr cart;    // D → M⊗N over δ
  TotArr opcart;  // D → M⊙N over π
};

CompParts compositeParts(const Fibration& phi, const FinSet& a, const FinSet& b,
                         const FinSet& c, const TotObj& m, const TotObj& n) {
  TotObj t = phi.tensorObj(m, n);
  FinSet e = prodSet(prodSet(a, b), c);
  const std::size_t nb = b.size(), nc = c.size();
  FinFn delta = fnByIndex(e, phi.baseOf(t), [&](std::size_t x) {
    std::size_t k = x % nc, ij = x / nc;
    std::size_t j = ij % nb;
    return ij * (nb * nc) + (j * nc + k);
  });
  FinFn pi = fnByIndex(e, prodSet(a, c), [&](std::size_t x) {
    std::size_t k = x % nc, i = (x / nc) / nb;
    return i * nc + k;
  });
  TotArr cart = phi.cartesianLift(delta, t);
  TotArr opcart = phi.opcartesianLift(pi, cart.src);
  return {std::move(t), std::move(cart), std::move(opcart)};
}

// ---------------------------------------------------------------------------
// the framed bicategory of a fibration
// ---------------------------------------------------------------------------

class FrInstance final : public dbl::Instance {
 public:
  explicit FrInstance(const Fibration& phi) : phi_(phi) {}

  const Fibration& fibration() const { return phi_; }

  std::string name() const override { return "fr-" + phi_.name(); }

  bool objEq(const dbl::Obj& a, const dbl::Obj& b) const override { return ob(a) == ob(b); }

  bool vertEq(const dbl::Vert& f, const dbl::Vert& g) const override { return vt(f) == vt(g); }

  bool hcellEq(const dbl::HCell& m, const dbl::HCell& n) const override {
    return ob(m.lf) == ob(n.lf) && ob(m.rf) == ob(n.rf) && phi_.totEq(hc(m), hc(n));
  }

  bool squareEq(const dbl::Square& a, const dbl::Square& b) const override {
    return hcellEq(a.src, b.src) && hcellEq(a.tgt, b.tgt) && vt(a.la) == vt(b.la) &&
           vt(a.ra) == vt(b.ra) && phi_.arrEq(sq(a), sq(b));
  }

  dbl::Vert vId(const dbl::Obj& a) const override {
    return dbl::Vert{FinFn::identity(ob(a)), a, a};
  }

  dbl::Vert vCompose(const dbl::Vert& f, const dbl::Vert& g) const override {
    if (!(vt(f).cod == vt(g).dom))
      throw InputError("vertical composition: the arrows are not composable");
    return dbl::Vert{vt(f).then(vt(g)), f.dom, g.cod};
  }

  dbl::HCell hUnit(const dbl::Obj& a) const override {
    FreeCellParts fc = freeCellParts(phi_, diagFn(ob(a)));
    return cellRaw(a, a, fc.opcart.tgt);
  }

  dbl::HCell hCompose(const dbl::HCell& m, const dbl::HCell& n) const override {
    if (!(ob(m.rf) == ob(n.lf)))
      throw InputError("horizontal composition: the cells are not composable");
    CompParts cp = compositeParts(phi_, ob(m.lf), ob(m.rf), ob(n.rf), hc(m), hc(n));
    return cellRaw(m.lf, n.rf, cp.opcart.tgt);
  }

  dbl::Square sqId(const dbl::HCell& m) const override {
    return dbl::Square{phi_.idArr(hc(m)), m, m, vId(m.lf), vId(m.rf)};
  }

  dbl::Square sqUnit(const dbl::Vert& f) const override {
    const FinFn& ff = vt(f);
    FreeCellParts fa = freeCellParts(phi_, diagFn(ff.dom));
    FreeCellParts fb = freeCellParts(phi_, diagFn(ff.cod));
    try {
      TotArr s1 = phi_.factorCart(fb.fromI, fa.fromI, ff);
      TotArr arr = phi_.factorOpcart(fa.opcart, phi_.compose(s1, fb.opcart), prodFn(ff, ff));
      return dbl::Square{std::move(arr), cellRaw(f.dom, f.dom, fa.opcart.tgt),
                         cellRaw(f.cod, f.cod, fb.opcart.tgt), f, f};
    } catch (const InputError& e) {
      throw InputError(
          std::string("unit square: the frameability hypothesis is violated for this "
                      "instance: ") +
          e.what());
    }
  }

  dbl::Square vCompose2(const dbl::Square& a, const dbl::Square& b) const override {
    if (!hcellEq(a.tgt, b.src))
      throw InputError("vertical square composition: the squares do not stack");
    return dbl::Square{phi_.compose(sq(a), sq(b)), a.src, b.tgt, vCompose(a.la, b.la),
                       vCompose(a.ra, b.ra)};
  }

  dbl::Square hCompose2(const dbl::Square& a, const dbl::Square& b) const override {
    if (!(vt(a.ra) == vt(b.la)))
      throw InputError("horizontal square composition: the middle frames do not match");
    if (!(ob(a.src.rf) == ob(b.src.lf)) || !(ob(a.tgt.rf) == ob(b.tgt.lf)))
      throw InputError("horizontal square composition: the cells are not composable");
    CompParts cs = compositeParts(phi_, ob(a.src.lf), ob(a.src.rf), ob(b.src.rf), hc(a.src),
                                  hc(b.src));
    CompParts ct = compositeParts(phi_, ob(a.tgt.lf), ob(a.tgt.rf), ob(b.tgt.rf), hc(a.tgt),
                                  hc(b.tgt));
    try {
      TotArr t = phi_.tensorArr(sq(a), sq(b));
      FinFn u = prodFn(prodFn(vt(a.la), vt(a.ra)), vt(b.ra));
      TotArr mid = phi_.factorCart(ct.cart, phi_.compose(cs.cart, t), u);
      TotArr out = phi_.factorOpcart(cs.opcart, phi_.compose(mid, ct.opcart),
                                     prodFn(vt(a.la), vt(b.ra)));
      return dbl::Square{std::move(out), cellRaw(a.src.lf, b.src.rf, cs.opcart.tgt),
                         cellRaw(a.tgt.lf, b.tgt.rf, ct.opcart.tgt), a.la, b.ra};
    } catch (const InputError& e) {
      throw InputError(
          std::string("horizontal square composition: the frameability hypothesis is "
                      "violated for this instance: ") +
          e.what());
    }
  }

  dbl::Square assoc(const dbl::HCell& m, const dbl::HCell& n, const dbl::HCell& p)
      const override {
    if (!(ob(m.rf) == ob(n.lf)) || !(ob(n.rf) == ob(p.lf)))
      throw InputError("associator: the cells are not composable");
    const FinSet& A = ob(m.lf);
    const FinSet& B = ob(m.rf);
    const FinSet& C = ob(n.rf);
    const FinSet& D = ob(p.rf);
    const TotObj& M = hc(m);
    const TotObj& N = hc(n);
    const TotObj& P = hc(p);
    const std::size_t nb = B.size(), nc = C.size(), nd = D.size();

    CompParts c1 = compositeParts(phi_, A, B, C, M, N);
    CompParts c2 = compositeParts(phi_, A, C, D, c1.opcart.tgt, P);
    CompParts r1 = compositeParts(phi_, B, C, D, N, P);
    CompParts r2 = compositeParts(phi_, A, B, D, M, r1.opcart.tgt);

    try {
      TotObj t3 = phi_.tensorObj(c1.tens, P);        // (M⊗N)⊗P
      TotObj t3r = phi_.tensorObj(M, r1.tens);       // M⊗(N⊗P)
      FinSet p4 = prodSet(prodSet(prodSet(A, B), C), D);
      auto dec = [&](std::size_t x, std::size_t& i, std::size_t& j, std::size_t& k,
                     std::size_t& l) {
        l = x % nd;
        std::size_t y = x / nd;
        k = y % nc;
        std::size_t ij = y / nc;
        j = ij % nb;
        i = ij / nb;
      };

      // left-nested side
      FinFn dbc = fnByIndex(p4, phi_.baseOf(t3), [&](std::size_t x) {
        std::size_t i, j, k, l;
        dec(x, i, j, k, l);
        std::size_t ij = i * nb + j, jk = j * nc + k, kl = k * nd + l;
        return (ij * (nb * nc) + jk) * (nc * nd) + kl;
      });
      TotArr g1 = phi_.cartesianLift(dbc, t3);
      FinSet e1 = prodSet(prodSet(A, B), C);
      FinFn u1 = fnByIndex(p4, prodSet(e1, prodSet(C, D)), [&](std::size_t x) {
        std::size_t i, j, k, l;
        dec(x, i, j, k, l);
        return ((i * nb + j) * nc + k) * (nc * nd) + (k * nd + l);
      });
      TotArr dashed = phi_.factorCart(phi_.tensorArr(c1.cart, phi_.idArr(P)), g1, u1);
      TotArr step = phi_.compose(dashed, phi_.tensorArr(c1.opcart, phi_.idArr(P)));
      FinFn w1 = fnByIndex(p4, prodSet(prodSet(A, C), D), [&](std::size_t x) {
        std::size_t i, j, k, l;
        dec(x, i, j, k, l);
        return (i * nc + k) * nd + l;
      });
      TotArr dotted = phi_.factorCart(c2.cart, step, w1);
      TotArr leftLeg = phi_.compose(dotted, c2.opcart);

      // right-nested side
      FinFn dbc2 = fnByIndex(p4, phi_.baseOf(t3r), [&](std::size_t x) {
        std::size_t i, j, k, l;
        dec(x, i, j, k, l);
        std::size_t ij = i * nb + j, jk = j * nc + k, kl = k * nd + l;
        return ij * ((nb * nc) * (nc * nd)) + (jk * (nc * nd) + kl);
      });
      TotArr g2 = phi_.cartesianLift(dbc2, t3r);
      FinSet e1r = prodSet(prodSet(B, C), D);
      FinFn u2 = fnByIndex(p4, prodSet(prodSet(A, B), e1r), [&](std::size_t x) {
        std::size_t i, j, k, l;
        dec(x, i, j, k, l);
        return (i * nb + j) * (nb * nc * nd) + ((j * nc + k) * nd + l);
      });
      TotArr dashed2 = phi_.factorCart(phi_.tensorArr(phi_.idArr(M), r1.cart), g2, u2);
      TotArr step2 = phi_.compose(dashed2, phi_.tensorArr(phi_.idArr(M), r1.opcart));
      FinFn w2 = fnByIndex(p4, prodSet(prodSet(A, B), D), [&](std::size_t x) {
        std::size_t i, j, k, l;
        dec(x, i, j, k, l);
        return (i * nb + j) * nd + l;
      });
      TotArr dotted2 = phi_.factorCart(r2.cart, step2, w2);
      TotArr rightLeg = phi_.compose(dotted2, r2.opcart);

      // the bridge over the identity, induced by tensor associativity
      TotArr aT = phi_.tensorAssoc(M, N, P);
      TotArr mid = phi_.factorCart(g2, phi_.compose(g1, aT), FinFn::identity(p4));
      TotArr out = phi_.factorOpcart(leftLeg, phi_.compose(mid, rightLeg),
                                     FinFn::identity(prodSet(A, D)));
      return dbl::Square{std::move(out), cellRaw(m.lf, p.rf, c2.opcart.tgt),
                         cellRaw(m.lf, p.rf, r2.opcart.tgt), vId(m.lf), vId(p.rf)};
    } catch (const InputError& e) {
      throw InputError(
          std::string("associator: the frameability hypothesis is violated for this "
                      "instance: ") +
          e.what());
    }
  }

  dbl::Square lunit(const dbl::HCell& m) const override {
    const FinSet& A = ob(m.lf);
    const FinSet& B = ob(m.rf);
    const TotObj& M = hc(m);
    const std::size_t na = A.size(), nbs = B.size();
    FreeCellParts fa = freeCellParts(phi_, diagFn(A));
    CompParts cd = compositeParts(phi_, A, A, B, fa.opcart.tgt, M);
    try {
      std::optional<TotArr> ell = phi_.invertArr(phi_.tensorLunit(M));
      if (!ell) throw InputError("the tensor unit constraint is not invertible");
      FinSet ab = prodSet(A, B);
      FinFn u = fnByIndex(ab, prodSet(A, ab), [&](std::size_t x) {
        return (x / nbs) * (na * nbs) + x;
      });
      TotArr dashed = phi_.factorCart(phi_.tensorArr(fa.fromI, phi_.idArr(M)), *ell, u);
      TotArr step = phi_.compose(dashed, phi_.tensorArr(fa.opcart, phi_.idArr(M)));
      FinFn v = fnByIndex(ab, prodSet(prodSet(A, A), B), [&](std::size_t x) {
        std::size_t i = x / nbs, j = x % nbs;
        return (i * na + i) * nbs + j;
      });
      TotArr dotted = phi_.factorCart(cd.cart, step, v);
      TotArr toComposite = phi_.compose(dotted, cd.opcart);  // M → U_A ⊙ M, invertible
      std::optional<TotArr> out = phi_.invertArr(toComposite);
      if (!out) throw InputError("the unit comparison is not invertible");
      return dbl::Square{std::move(*out), cellRaw(m.lf, m.rf, cd.opcart.tgt), m, vId(m.lf),
                         vId(m.rf)};
    } catch (const InputError& e) {
      throw InputError(
          std::string("left unitor: the frameability hypothesis is violated for this "
                      "instance: ") +
          e.what());
    }
  }

  dbl::Square runit(const dbl::HCell& m) const override {
    const FinSet& A = ob(m.lf);
    const FinSet& B = ob(m.rf);
    const TotObj& M = hc(m);
    const std::size_t nbs = B.size();
    FreeCellParts fb = freeCellParts(phi_, diagFn(B));
    CompParts cd = compositeParts(phi_, A, B, B, M, fb.opcart.tgt);
    try {
      std::optional<TotArr> r = phi_.invertArr(phi_.tensorRunit(M));
      if (!r) throw InputError("the tensor unit constraint is not invertible");
      FinSet ab = prodSet(A, B);
      FinFn u = fnByIndex(ab, prodSet(ab, B), [&](std::size_t x) {
        return x * nbs + (x % nbs);
      });
      TotArr dashed = phi_.factorCart(phi_.tensorArr(phi_.idArr(M), fb.fromI), *r, u);
      TotArr step = phi_.compose(dashed, phi_.tensorArr(phi_.idArr(M), fb.opcart));
      FinFn v = fnByIndex(ab, prodSet(prodSet(A, B), B), [&](std::size_t x) {
        return x * nbs + (x % nbs);
      });
      TotArr dotted = phi_.factorCart(cd.cart, step, v);
      TotArr toComposite = phi_.compose(dotted, cd.opcart);  // M → M ⊙ U_B, invertible
      std::optional<TotArr> out = phi_.invertArr(toComposite);
      if (!out) throw InputError("the unit comparison is not invertible");
      return dbl::Square{std::move(*out), cellRaw(m.lf, m.rf, cd.opcart.tgt), m, vId(m.lf),
                         vId(m.rf)};
    } catch (const InputError& e) {
      throw InputError(
          std::string("right unitor: the frameability hypothesis is violated for this "
                      "instance: ") +
          e.what());
    }
  }

  std::optional<dbl::Square> invert(const dbl::Square& s) const override {
    if (!vt(s.la).bijective() || !vt(s.ra).bijective()) return std::nullopt;
    std::optional<TotArr> inv = phi_.invertArr(sq(s));
    if (!inv) return std::nullopt;
    return dbl::Square{std::move(*inv), s.tgt, s.src,
                       dbl::Vert{vt(s.la).inverse(), s.la.cod, s.la.dom},
                       dbl::Vert{vt(s.ra).inverse(), s.ra.cod, s.ra.dom}};
  }

  dbl::Restriction restrictCell(const dbl::Vert& f, const dbl::HCell& m,
                                const dbl::Vert& g) const override {
    if (!(vt(f).cod == ob(m.lf)) || !(vt(g).cod == ob(m.rf)))
      throw InputError("restriction: the frames do not target the cell");
    TotArr cart = phi_.cartesianLift(prodFn(vt(f), vt(g)), hc(m));
    dbl::HCell cell = cellRaw(f.dom, g.dom, cart.src);
    dbl::Square csq{std::move(cart), cell, m, f, g};
    return dbl::Restriction{std::move(cell), std::move(csq)};
  }

  dbl::Extension extendCell(const dbl::Vert& f, const dbl::HCell& m,
                            const dbl::Vert& g) const override {
    if (!(vt(f).dom == ob(m.lf)) || !(vt(g).dom == ob(m.rf)))
      throw InputError("extension: the frames do not start at the cell");
    TotArr opcart = phi_.opcartesianLift(prodFn(vt(f), vt(g)), hc(m));
    dbl::HCell cell = cellRaw(f.cod, g.cod, opcart.tgt);
    dbl::Square osq{std::move(opcart), m, cell, f, g};
    return dbl::Extension{std::move(cell), std::move(osq)};
  }

  std::optional<dbl::Square> factorCart(const dbl::Square& cart, const dbl::Square& cand,
                                        const dbl::Vert& u, const dbl::Vert& v) const override {
    if (!hcellEq(cart.tgt, cand.tgt))
      throw InputError("cartesian factorization: the squares do not share a target");
    if (!(vt(u).dom == ob(cand.src.lf)) || !(vt(u).cod == ob(cart.src.lf)) ||
        !(vt(v).dom == ob(cand.src.rf)) || !(vt(v).cod == ob(cart.src.rf)))
      throw InputError("cartesian factorization: frame maps do not connect the sources");
    if (!(vt(cand.la) == vt(u).then(vt(cart.la))) ||
        !(vt(cand.ra) == vt(v).then(vt(cart.ra))))
      throw InputError("cartesian factorization: frame maps do not factor the candidate");
    if (phi_.isCartesian(sq(cart))) {
      try {
        TotArr chi = phi_.factorCart(sq(cart), sq(cand), prodFn(vt(u), vt(v)));
        return dbl::Square{std::move(chi), cand.src, cart.src, u, v};
      } catch (const InputError&) {
        return std::nullopt;
      }
    }
    // not a cleavage witness: fall back to exhaustive unique factorization
    std::optional<dbl::Square> hit;
    bool unique = true;
    forEachSquare(cand.src, cart.src, u, v, [&](const dbl::Square& x) {
      if (squareEq(vCompose2(x, cart), cand)) {
        if (hit) {
          unique = false;
          return false;
        }
        hit = x;
      }
      return true;
    });
    if (!unique) return std::nullopt;
    return hit;
  }

  std::optional<dbl::Square> factorOpcart(const dbl::Square& opcart, const dbl::Square& cand,
                                          const dbl::Vert& u, const dbl::Vert& v)
      const override {
    if (!hcellEq(opcart.src, cand.src))
      throw InputError("opcartesian factorization: the squares do not share a source");
    if (!(vt(u).dom == ob(opcart.tgt.lf)) || !(vt(u).cod == ob(cand.tgt.lf)) ||
        !(vt(v).dom == ob(opcart.tgt.rf)) || !(vt(v).cod == ob(cand.tgt.rf)))
      throw InputError("opcartesian factorization: frame maps do not connect the targets");
    if (!(vt(cand.la) == vt(opcart.la).then(vt(u))) ||
        !(vt(cand.ra) == vt(opcart.ra).then(vt(v))))
      throw InputError("opcartesian factorization: frame maps do not factor the candidate");
    if (phi_.isOpcartesian(sq(opcart))) {
      try {
        TotArr chi = phi_.factorOpcart(sq(opcart), sq(cand), prodFn(vt(u), vt(v)));
        return dbl::Square{std::move(chi), opcart.tgt, cand.tgt, u, v};
      } catch (const InputError&) {
        return std::nullopt;
      }
    }
    std::optional<dbl::Square> hit;
    bool unique = true;
    forEachSquare(opcart.tgt, cand.tgt, u, v, [&](const dbl::Square& x) {
      if (squareEq(vCompose2(opcart, x), cand)) {
        if (hit) {
          unique = false;
          return false;
        }
        hit = x;
      }
      return true;
    });
    if (!unique) return std::nullopt;
    return hit;
  }

  void forEachSquare(const dbl::HCell& src, const dbl::HCell& tgt, const dbl::Vert& f,
                     const dbl::Vert& g,
                     const std::function<bool(const dbl::Square&)>& cb) const override {
    phi_.forEachArr(hc(src), hc(tgt), prodFn(vt(f), vt(g)), [&](const TotArr& a) {
      return cb(dbl::Square{a, src, tgt, f, g});
    });
  }

  void forEachVert(const dbl::Obj& a, const dbl::Obj& b,
                   const std::function<bool(const dbl::Vert&)>& cb) const override {
    fin::forEachFunction(ob(a), ob(b),
                         [&](const FinFn& f) { return cb(dbl::Vert{f, a, b}); });
  }

  std::optional<dbl::Square> findGlobularIso(const dbl::HCell& m,
                                             const dbl::HCell& n) const override {
    if (!(ob(m.lf) == ob(n.lf)) || !(ob(m.rf) == ob(n.rf))) return std::nullopt;
    std::optional<TotArr> iso = phi_.findIso(hc(m), hc(n));
    if (!iso) return std::nullopt;
    return dbl::Square{std::move(*iso), m, n, vId(m.lf), vId(m.rf)};
  }

  dbl::LocalCoeq localCoequalizer(const dbl::Square& a, const dbl::Square& b) const override {
    if (!hcellEq(a.src, b.src) || !hcellEq(a.tgt, b.tgt))
      throw InputError("local coequalizer: the squares are not parallel");
    if (!(vt(a.la) == FinFn::identity(ob(a.src.lf))) ||
        !(vt(a.ra) == FinFn::identity(ob(a.src.rf))) || !(vt(b.la) == vt(a.la)) ||
        !(vt(b.ra) == vt(a.ra)))
      throw InputError("local coequalizer: the squares are not globular");
    TotArr proj = phi_.coeqArr(sq(a), sq(b));
    dbl::HCell cell = cellRaw(a.src.lf, a.src.rf, proj.tgt);
    dbl::Square psq{std::move(proj), a.tgt, cell, vId(a.src.lf), vId(a.src.rf)};
    return dbl::LocalCoeq{std::move(cell), std::move(psq)};
  }

  std::optional<dbl::Square> factorCoeq(const dbl::LocalCoeq& q, const dbl::Square& cand,
                                        const dbl::Vert& u, const dbl::Vert& v) const override {
    if (!hcellEq(cand.src, q.proj.src))
      throw InputError("coequalizer factorization: the candidate does not start at the "
                       "quotiented cell");
    if (!(vt(cand.la) == vt(u)) || !(vt(cand.ra) == vt(v)))
      throw InputError("coequalizer factorization: the frames do not match");
    std::optional<TotArr> r = phi_.factorCoeq(sq(q.proj), sq(cand), prodFn(vt(u), vt(v)));
    if (!r) return std::nullopt;
    return dbl::Square{std::move(*r), q.proj.tgt, cand.tgt, u, v};
  }

  dbl::Obj sampleObj(fin::Rng& rng, std::size_t maxSize) const override {
    std::size_t n = rng.below(maxSize + 1);
    std::size_t id = rng.below(10000);
    std::vector<std::string> elems;
    elems.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      elems.push_back("e" + std::to_string(i) + "_" + std::to_string(id));
    return dbl::Obj{fin::makeSet("S" + std::to_string(id), std::move(elems))};
  }

  std::optional<dbl::Vert> sampleVert(fin::Rng& rng, const dbl::Obj& dom,
                                      const dbl::Obj& cod) const override {
    const FinSet& d = ob(dom);
    const FinSet& c = ob(cod);
    if (c.size() == 0 && d.size() != 0) return std::nullopt;
    std::vector<std::size_t> tab(d.size());
    for (auto& v : tab) v = rng.below(c.size());
    return dbl::Vert{FinFn{d, c, std::move(tab)}, dom, cod};
  }

  dbl::HCell sampleHCell(fin::Rng& rng, const dbl::Obj& lf, const dbl::Obj& rf,
                         std::size_t maxSize) const override {
    TotObj m = phi_.sampleTot(rng, prodSet(ob(lf), ob(rf)), maxSize);
    return cellRaw(lf, rf, std::move(m));
  }

  std::optional<dbl::Square> sampleSquare(fin::Rng& rng, const dbl::HCell& src,
                                          const dbl::HCell& tgt, const dbl::Vert& f,
                                          const dbl::Vert& g) const override {
    std::optional<TotArr> a = phi_.sampleArr(rng, hc(src), hc(tgt), prodFn(vt(f), vt(g)));
    if (!a) return std::nullopt;
    return dbl::Square{std::move(*a), src, tgt, f, g};
  }

  json objJson(const dbl::Obj& a) const override { return io::setJson(ob(a)); }

  json vertJson(const dbl::Vert& f) const override { return io::fnJson(vt(f)); }

  json hcellJson(const dbl::HCell& m) const override {
    return json{{"left", io::setJson(ob(m.lf))},
                {"right", io::setJson(ob(m.rf))},
                {"object", phi_.totJson(hc(m))}};
  }

  json squareJson(const dbl::Square& s) const override {
    return json{{"src", hcellJson(s.src)},
                {"tgt", hcellJson(s.tgt)},
                {"left", io::fnJson(vt(s.la))},
                {"right", io::fnJson(vt(s.ra))},
                {"arrow", phi_.arrJson(sq(s))}};
  }

  static const FinSet& ob(const dbl::Obj& a) {
    return unwrap<FinSet>(a.v, "a finite set object");
  }
  static const FinFn& vt(const dbl::Vert& f) {
    return unwrap<FinFn>(f.v, "a function vertical arrow");
  }
  static const TotObj& hc(const dbl::HCell& m) {
    return unwrap<TotObj>(m.v, "a fibered horizontal cell");
  }
  static const TotArr& sq(const dbl::Square& s) {
    return unwrap<TotArr>(s.v, "a fibered square");
  }

 private:
  dbl::HCell cellRaw(const dbl::Obj& lf, const dbl::Obj& rf, TotObj m) const {
    return dbl::HCell{std::move(m), lf, rf};
  }

  const Fibration& phi_;
};

// reconstruct the span presentation of a fibered cell over the arrow
// fibration: legs are the projections composed with the product projections
span::SpanCell arrCellToSpan(const dbl::HCell& m) {
  const FinSet& a = FrInstance::ob(m.lf);
  const FinSet& b = FrInstance::ob(m.rf);
  const ArrObject& mm = arrObjOf(FrInstance::hc(m));
  fin::SpanDiagram pr = fin::product(a, b);
  return span::makeSpan(a, b, mm.total, mm.proj.then(pr.p1), mm.proj.then(pr.p2));
}

mat::MatCell famCellToMat(const dbl::HCell& m) {
  const FinSet& a = FrInstance::ob(m.lf);
  const FinSet& b = FrInstance::ob(m.rf);
  const FamObject& mm = famObjOf(FrInstance::hc(m));
  return mat::makeMat(a, b, mm.fibers);
}

}  // namespace

// ---------------------------------------------------------------------------
// wrappers and accessors
// ---------------------------------------------------------------------------

TotObj makeArrObject(FinSet total, FinSet base, FinFn proj) {
  if (proj.dom != total || proj.cod != base)
    throw InputError("arrow fibration object: the projection does not match the sets");
  return TotObj{ArrObject{std::move(total), std::move(base), std::move(proj)}};
}

TotArr makeArrArrow(TotObj src, TotObj tgt, FinFn base, FinFn map) {
  const ArrObject& s = arrObjOf(src);
  const ArrObject& t = arrObjOf(tgt);
  if (base.dom != s.base || base.cod != t.base)
    throw InputError("arrow fibration arrow: the base arrow does not match the objects");
  if (map.dom != s.total || map.cod != t.total)
    throw InputError("arrow fibration arrow: the total map does not match the objects");
  if (map.then(t.proj) != s.proj.then(base))
    throw InputError("arrow fibration arrow: the square over the base does not commute");
  return TotArr{std::move(map), std::move(src), std::move(tgt), std::move(base)};
}

const ArrObject& arrObjOf(const TotObj& m) {
  return unwrap<ArrObject>(m.v, "an object of the arrow fibration");
}

const FinFn& arrMapOf(const TotArr& a) {
  return unwrap<FinFn>(a.v, "an arrow of the arrow fibration");
}

TotObj makeFamObject(FinSet index, std::vector<FinSet> fibers) {
  if (fibers.size() != index.size())
    throw InputError("family fibration object: one fiber per index element is required");
  return TotObj{FamObject{std::move(index), std::move(fibers)}};
}

TotArr makeFamArrow(TotObj src, TotObj tgt, FinFn base, std::vector<FinFn> comps) {
  const FamObject& s = famObjOf(src);
  const FamObject& t = famObjOf(tgt);
  if (base.dom != s.index || base.cod != t.index)
    throw InputError("family fibration arrow: the base arrow does not match the objects");
  if (comps.size() != s.fibers.size())
    throw InputError("family fibration arrow: one component per fiber is required");
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (comps[i].dom != s.fibers[i] || comps[i].cod != t.fibers[base.tab[i]])
      throw InputError("family fibration arrow: a component does not match the fibers");
  return TotArr{std::move(comps), std::move(src), std::move(tgt), std::move(base)};
}

const FamObject& famObjOf(const TotObj& m) {
  return unwrap<FamObject>(m.v, "an object of the family fibration");
}

const std::vector<FinFn>& famMapsOf(const TotArr& a) {
  return unwrap<std::vector<FinFn>>(a.v, "an arrow of the family fibration");
}

const Fibration& arrFibration() {
  static const ArrFibration f;
  return f;
}

const Fibration& famFibration() {
  static const FamFibration f;
  return f;
}

// ---------------------------------------------------------------------------
// fibration law suite
// ---------------------------------------------------------------------------

namespace {

FinSet sampleBase(fin::Rng& rng, std::size_t maxSize) {
  std::size_t n = rng.below(maxSize + 1);
  std::size_t id = rng.below(10000);
  std::vector<std::string> elems;
  elems.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    elems.push_back("b" + std::to_string(i) + "_" + std::to_string(id));
  return fin::makeSet("B" + std::to_string(id), std::move(elems));
}

std::optional<FinFn> sampleBaseFn(fin::Rng& rng, const FinSet& a, const FinSet& b) {
  if (b.size() == 0 && a.size() != 0) return std::nullopt;
  std::vector<std::size_t> tab(a.size());
  for (auto& v : tab) v = rng.below(b.size());
  return FinFn{a, b, std::move(tab)};
}

}  // namespace

laws::LawReport checkFibration(const Fibration& phi, const laws::Sampler& s) {
  laws::LawReport rep;
  rep.lawName = "fibration-axioms";
  rep.seed = s.seed;
  auto fail = [&](const std::string& law, json w) {
    rep.pass = false;
    rep.lawName = law;
    rep.witness = std::move(w);
  };
  for (std::size_t i = 0; i < s.samples && rep.pass; ++i) {
    fin::Rng rng = laws::sampleRng(s.seed, i);
    try {
      FinSet b1 = sampleBase(rng, s.maxObj);
      FinSet b2 = sampleBase(rng, s.maxObj);
      TotObj m = phi.sampleTot(rng, b2, s.maxCell);
      TotObj n = phi.sampleTot(rng, b1, s.maxCell);

      if (!phi.arrEq(phi.cartesianLift(FinFn::identity(b2), m), phi.idArr(m))) {
        fail("cleavage-normal-cartesian", phi.totJson(m));
        break;
      }
      if (!phi.arrEq(phi.opcartesianLift(FinFn::identity(b1), n), phi.idArr(n))) {
        fail("cleavage-normal-opcartesian", phi.totJson(n));
        break;
      }
      if (!(phi.baseOf(phi.unitObj()) == terminalSet())) {
        fail("unit-over-terminal", json::object());
        break;
      }
      if (!(phi.baseOf(phi.tensorObj(m, n)) == prodSet(b2, b1))) {
        fail("projection-strict", json{{"left", phi.totJson(m)}, {"right", phi.totJson(n)}});
        break;
      }

      std::optional<FinFn> fo = sampleBaseFn(rng, b1, b2);
      if (fo) {
        const FinFn& f = *fo;
        TotArr cart = phi.cartesianLift(f, m);
        if (!(cart.base == f) || !phi.totEq(cart.tgt, m) || !(phi.baseOf(cart.src) == b1)) {
          fail("cartesian-lift-frames", phi.arrJson(cart));
          break;
        }
        if (!phi.isCartesian(cart)) {
          fail("cartesian-lift-cartesian", phi.arrJson(cart));
          break;
        }
        TotArr op = phi.opcartesianLift(f, n);
        if (!(op.base == f) || !phi.totEq(op.src, n) || !(phi.baseOf(op.tgt) == b2)) {
          fail("opcartesian-lift-frames", phi.arrJson(op));
          break;
        }
        if (!phi.isOpcartesian(op)) {
          fail("opcartesian-lift-opcartesian", phi.arrJson(op));
          break;
        }
        TotObj m2 = phi.sampleTot(rng, b2, s.maxCell);
        TotArr cart2 = phi.cartesianLift(f, m2);
        if (!phi.isCartesian(phi.tensorArr(cart, cart2))) {
          fail("tensor-preserves-cartesian", phi.arrJson(cart2));
          break;
        }
        TotObj n2 = phi.sampleTot(rng, b1, s.maxCell);
        TotArr op2 = phi.opcartesianLift(f, n2);
        if (!phi.isOpcartesian(phi.tensorArr(op, op2))) {
          fail("tensor-preserves-opcartesian", phi.arrJson(op2));
          break;
        }

        FinSet b0 = sampleBase(rng, s.maxObj);
        std::optional<FinFn> uo = sampleBaseFn(rng, b0, b1);
        if (uo) {
          TotObj x = phi.sampleTot(rng, b0, s.maxCell);
          std::optional<TotArr> xa = phi.sampleArr(rng, x, cart.src, *uo);
          if (xa) {
            TotArr got = phi.factorCart(cart, phi.compose(*xa, cart), *uo);
            if (!phi.arrEq(got, *xa)) {
              fail("cartesian-factorization-roundtrip", phi.arrJson(*xa));
              break;
            }
          }
          std::optional<FinFn> wo = sampleBaseFn(rng, b2, b0);
          if (wo) {
            TotObj y = phi.sampleTot(rng, b0, s.maxCell);
            std::optional<TotArr> ya = phi.sampleArr(rng, op.tgt, y, *wo);
            if (ya) {
              TotArr got = phi.factorOpcart(op, phi.compose(op, *ya), *wo);
              if (!phi.arrEq(got, *ya)) {
                fail("opcartesian-factorization-roundtrip", phi.arrJson(*ya));
                break;
              }
            }
          }
        }
      }

      TotObj p = phi.sampleTot(rng, b1, s.maxCell);
      TotArr as = phi.tensorAssoc(m, n, p);
      if (!phi.totEq(as.src, phi.tensorObj(phi.tensorObj(m, n), p)) ||
          !phi.totEq(as.tgt, phi.tensorObj(m, phi.tensorObj(n, p))) || !phi.invertArr(as)) {
        fail("tensor-associativity-constraint", phi.arrJson(as));
        break;
      }
      TotArr lu = phi.tensorLunit(m);
      if (!phi.totEq(lu.src, phi.tensorObj(phi.unitObj(), m)) || !phi.totEq(lu.tgt, m) ||
          !phi.invertArr(lu)) {
        fail("tensor-left-unit-constraint", phi.arrJson(lu));
        break;
      }
      TotArr ru = phi.tensorRunit(m);
      if (!phi.totEq(ru.src, phi.tensorObj(m, phi.unitObj())) || !phi.totEq(ru.tgt, m) ||
          !phi.invertArr(ru)) {
        fail("tensor-right-unit-constraint", phi.arrJson(ru));
        break;
      }
    } catch (const BudgetError& e) {
      rep.budgetExceeded = true;
      rep.notes.push_back(std::string("sample skipped: ") + e.what());
      continue;
    }
    ++rep.sampleCount;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// fiberwise tensor, base change, free cells
// ---------------------------------------------------------------------------

TotObj fiberTensor(const Fibration& phi, const TotObj& m, const TotObj& n) {
  if (!(phi.baseOf(m) == phi.baseOf(n)))
    throw InputError("fiberwise tensor: the objects lie over different bases");
  return phi.cartesianLift(diagFn(phi.baseOf(m)), phi.tensorObj(m, n)).src;
}

BCVerdict bcCheck(const Fibration& phi, const FinFn& h, const FinFn& k, const FinFn& f,
                  const FinFn& g, const TotObj& m) {
  if (h.dom != k.dom || g.dom != h.cod || f.dom != k.cod || g.cod != f.cod)
    throw InputError("base-change check: the arrows do not form a square");
  if (!(k.then(f) == h.then(g)))
    throw InputError("base-change check: the base square does not commute");
  if (!(phi.baseOf(m) == h.cod))
    throw InputError("base-change check: the object does not lie over the square's corner");
  TotArr cart = phi.cartesianLift(h, m);          // h*M → M
  TotArr xi = phi.opcartesianLift(g, m);          // M → g_!M
  TotArr chi = phi.opcartesianLift(k, cart.src);  // h*M → k_!h*M
  TotArr mediating = phi.factorOpcart(chi, phi.compose(cart, xi), f);
  TotArr om = phi.cartesianLift(f, xi.tgt);       // f*g_!M → g_!M
  TotArr transform = phi.factorCart(om, mediating, FinFn::identity(k.cod));
  BCVerdict v{h, k, f, g, std::move(transform), false, json::object()};
  v.iso = phi.invertArr(v.transform).has_value();
  if (!v.iso) v.witness = phi.invertibilityWitness(v.transform);
  return v;
}

TotObj freeCategoryMorphism(const Fibration& phi, const FinFn& f) {
  return freeCellParts(phi, f).opcart.tgt;
}

// ---------------------------------------------------------------------------
// framed instance wrappers
// ---------------------------------------------------------------------------

dbl::Obj frObj(FinSet a) { return dbl::Obj{std::move(a)}; }

dbl::Vert frVert(FinFn f) {
  dbl::Obj d{f.dom};
  dbl::Obj c{f.cod};
  return dbl::Vert{std::move(f), std::move(d), std::move(c)};
}

dbl::HCell frCell(const Fibration& phi, FinSet lf, FinSet rf, TotObj m) {
  if (!(phi.baseOf(m) == prodSet(lf, rf)))
    throw InputError("fibered cell: the object does not lie over the product of the frames");
  return dbl::HCell{std::move(m), dbl::Obj{std::move(lf)}, dbl::Obj{std::move(rf)}};
}

dbl::Square frSquare(const Fibration& phi, dbl::HCell src, dbl::HCell tgt, FinFn f, FinFn g,
                     TotArr a) {
  if (!phi.totEq(frCellOf(src), a.src) || !phi.totEq(frCellOf(tgt), a.tgt))
    throw InputError("fibered square: the arrow does not connect the cells");
  if (!(frObjOf(src.lf) == f.dom) || !(frObjOf(tgt.lf) == f.cod) ||
      !(frObjOf(src.rf) == g.dom) || !(frObjOf(tgt.rf) == g.cod))
    throw InputError("fibered square: the frame maps do not match the cells");
  if (!(a.base == prodFn(f, g)))
    throw InputError("fibered square: the arrow does not lie over the product of the frames");
  dbl::Vert la = frVert(std::move(f));
  dbl::Vert ra = frVert(std::move(g));
  return dbl::Square{std::move(a), std::move(src), std::move(tgt), std::move(la),
                     std::move(ra)};
}

const FinSet& frObjOf(const dbl::Obj& a) { return FrInstance::ob(a); }
const FinFn& frVertOf(const dbl::Vert& f) { return FrInstance::vt(f); }
const TotObj& frCellOf(const dbl::HCell& m) { return FrInstance::hc(m); }
const TotArr& frArrOf(const dbl::Square& s) { return FrInstance::sq(s); }

std::unique_ptr<dbl::Instance> makeFrInstance(const Fibration& phi) {
  return std::make_unique<FrInstance>(phi);
}

const dbl::Instance& frArrInstance() {
  static const FrInstance i(arrFibration());
  return i;
}

const dbl::Instance& frFamInstance() {
  static const FrInstance i(famFibration());
  return i;
}

const Fibration& fibrationOf(const dbl::Instance& inst) {
  const auto* p = dynamic_cast<const FrInstance*>(&inst);
  if (!p) throw InputError("the instance is not generated by a fibration");
  return p->fibration();
}

// ---------------------------------------------------------------------------
// free enriched categories
// ---------------------------------------------------------------------------

mod::MonoidData freeEnrichedCategory(const dbl::Instance& fr, const mod::FinCat& c) {
  const Fibration& phi = fibrationOf(fr);
  laws::LawReport ok = mod::checkFinCat(c);
  if (!ok.pass)
    throw InputError("free enriched category: the input is not a category: " + ok.lawName);
  const FinSet& a = c.objects;
  const FinSet& mor = c.morphisms;
  const std::size_t na = a.size();
  FinSet aa = prodSet(a, a);

  FinFn st = fnByIndex(mor, aa,
                       [&](std::size_t i) { return c.src.tab[i] * na + c.tgt.tab[i]; });
  FreeCellParts fcU = freeCellParts(phi, diagFn(a));
  FreeCellParts fcC = freeCellParts(phi, st);
  TotObj carrier = fcC.opcart.tgt;

  // the unit, induced by the identity assignment on generators
  TotArr unitArr = freeMapArr(phi, fcU, fcC, c.ident, FinFn::identity(aa));

  // composable pairs with their endpoint and composition data
  std::vector<std::string> cpElems;
  std::vector<std::pair<std::size_t, std::size_t>> cpPairs;
  for (std::size_t u = 0; u < mor.size(); ++u)
    for (std::size_t v = 0; v < mor.size(); ++v)
      if (c.tgt.tab[u] == c.src.tab[v]) {
        cpElems.push_back(fin::pairLabel(mor.elems[u], mor.elems[v]));
        cpPairs.emplace_back(u, v);
      }
  FinSet cp = fin::makeSet("composable", std::move(cpElems));
  FinSet e3 = prodSet(aa, a);
  FinFn e = fnByIndex(cp, e3, [&](std::size_t p) {
    auto [u, v] = cpPairs[p];
    return (c.src.tab[u] * na + c.tgt.tab[u]) * na + c.tgt.tab[v];
  });
  FinFn compFn = fnByIndex(cp, mor, [&](std::size_t p) {
    auto [u, v] = cpPairs[p];
    return *c.compose(u, v);
  });

  FreeCellParts fcCP = freeCellParts(phi, e);
  CompParts cd = compositeParts(phi, a, a, a, carrier, carrier);

  // identify the free cell on composable pairs with the composite C⊙C
  std::optional<TotArr> iToII = phi.invertArr(phi.tensorLunit(phi.unitObj()));
  if (!iToII)
    throw InputError("free enriched category: the tensor unit constraint is not invertible");
  TotArr a3 = phi.compose(fcCP.fromI, *iToII);  // P_cp → I⊗I
  FinFn pp = fnByIndex(cp, prodSet(mor, mor), [&](std::size_t p) {
    auto [u, v] = cpPairs[p];
    return u * mor.size() + v;
  });
  TotArr s2 = phi.factorCart(phi.tensorArr(fcC.fromI, fcC.fromI), a3, pp);
  TotArr s3 = phi.compose(s2, phi.tensorArr(fcC.opcart, fcC.opcart));  // P_cp → C⊗C
  TotArr s4 = phi.factorCart(cd.cart, s3, e);                          // P_cp → D
  TotArr s5 = phi.factorOpcart(fcCP.opcart, s4, FinFn::identity(e3));  // F → D
  std::optional<TotArr> s5inv = phi.invertArr(s5);
  if (!s5inv)
    throw InputError(
        "free enriched category: the comparison with the composite is not invertible");

  // composition, induced on generators, then transported through the composite
  FinFn pi3 = fnByIndex(e3, aa, [&](std::size_t x) {
    std::size_t k = x % na, i = (x / na) / na;
    return i * na + k;
  });
  TotArr compArr = freeMapArr(phi, fcCP, fcC, compFn, pi3);
  TotArr m0 = phi.compose(*s5inv, compArr);  // D → carrier over π
  TotArr multArr = phi.factorOpcart(cd.opcart, m0, FinFn::identity(aa));

  dbl::Obj base = frObj(a);
  dbl::HCell carrierCell = frCell(phi, a, a, carrier);
  dbl::HCell unitCell = frCell(phi, a, a, fcU.opcart.tgt);
  dbl::HCell compositeCell = frCell(phi, a, a, cd.opcart.tgt);
  dbl::Square unitSq = frSquare(phi, unitCell, carrierCell, FinFn::identity(a),
                                FinFn::identity(a), std::move(unitArr));
  dbl::Square multSq = frSquare(phi, compositeCell, carrierCell, FinFn::identity(a),
                                FinFn::identity(a), std::move(multArr));
  return mod::MonoidData{std::move(base), std::move(carrierCell), std::move(unitSq),
                         std::move(multSq)};
}

// ---------------------------------------------------------------------------
// comparison functors
// ---------------------------------------------------------------------------

laws::FramedFunctor frArrToSpan() {
  laws::FramedFunctor f;
  f.dom = &frArrInstance();
  f.cod = &span::spanInstance();
  f.name = "fibered-cells-to-spans";
  f.flavor = laws::Flavor::Strong;
  f.onObj = [](const dbl::Obj& a) { return span::wrapObj(frObjOf(a)); };
  f.onVert = [](const dbl::Vert& v) { return span::wrapVert(frVertOf(v)); };
  f.onCell = [](const dbl::HCell& m) { return span::wrapCell(arrCellToSpan(m)); };
  f.onSquare = [](const dbl::Square& s) {
    return span::wrapSquare(arrCellToSpan(s.src), arrCellToSpan(s.tgt), frVertOf(s.la),
                            frVertOf(s.ra), arrMapOf(frArrOf(s)));
  };
  f.compCmp = [](const dbl::HCell& m, const dbl::HCell& n) {
    const dbl::Instance& fr = frArrInstance();
    const FinSet& a = frObjOf(m.lf);
    const FinSet& b = frObjOf(m.rf);
    const FinSet& c = frObjOf(n.rf);
    dbl::HCell comp = fr.hCompose(m, n);
    span::SpanCell sm = arrCellToSpan(m);
    span::SpanCell sn = arrCellToSpan(n);
    span::SpanCell st = arrCellToSpan(comp);
    span::SpanCell sc = span::spanCompose(sm, sn);
    // match each composable pair with its element of the lifted object
    CompParts cp = compositeParts(arrFibration(), a, b, c, frCellOf(m), frCellOf(n));
    const FinFn& cartMap = arrMapOf(cp.cart);
    const std::size_t nTot = arrObjOf(cp.tens).total.size();
    std::vector<std::size_t> rev(nTot, 0);
    for (std::size_t d = 0; d < cartMap.tab.size(); ++d) rev[cartMap.tab[d]] = d;
    fin::SpanDiagram pb = fin::pullback(sm.r, sn.l);
    std::vector<std::size_t> tab(pb.apex.size());
    const std::size_t nN = sn.apex.size();
    for (std::size_t i = 0; i < tab.size(); ++i)
      tab[i] = rev[pb.p1.tab[i] * nN + pb.p2.tab[i]];
    return span::wrapSquare(sc, st, FinFn::identity(sm.lf), FinFn::identity(sn.rf),
                            FinFn{sc.apex, st.apex, std::move(tab)});
  };
  f.unitCmp = [](const dbl::Obj& a) {
    const FinSet& s = frObjOf(a);
    dbl::HCell u = frArrInstance().hUnit(a);
    span::SpanCell su = span::spanUnit(s);
    span::SpanCell tu = arrCellToSpan(u);
    return span::wrapSquare(su, tu, FinFn::identity(s), FinFn::identity(s),
                            iotaFn(su.apex, tu.apex));
  };
  return f;
}

laws::EquivalenceChoices frArrToSpanChoices() {
  laws::EquivalenceChoices ch;
  ch.objInverse = [](const dbl::Obj& c) -> std::optional<dbl::Obj> {
    return frObj(span::objOf(c));
  };
  ch.objIso = [](const dbl::Obj& c) -> std::optional<dbl::Vert> {
    return span::wrapVert(FinFn::identity(span::objOf(c)));
  };
  ch.cellInverse = [](const dbl::HCell& n) -> std::optional<dbl::HCell> {
    const span::SpanCell& s = span::cellOf(n);
    FinSet ab = prodSet(s.lf, s.rf);
    FinFn proj = fnByIndex(s.apex, ab, [&](std::size_t x) {
      return s.l.tab[x] * s.rf.size() + s.r.tab[x];
    });
    return frCell(arrFibration(), s.lf, s.rf,
                  makeArrObject(s.apex, std::move(ab), std::move(proj)));
  };
  ch.cellIso = [](const dbl::HCell& n) -> std::optional<dbl::Square> {
    // the round trip reproduces the span on the nose
    return span::spanInstance().sqId(n);
  };
  return ch;
}

laws::FramedFunctor frFamToMat() {
  laws::FramedFunctor f;
  f.dom = &frFamInstance();
  f.cod = &mat::matInstance();
  f.name = "fibered-cells-to-matrices";
  f.flavor = laws::Flavor::Strong;
  f.onObj = [](const dbl::Obj& a) { return mat::wrapObj(frObjOf(a)); };
  f.onVert = [](const dbl::Vert& v) { return mat::wrapVert(frVertOf(v)); };
  f.onCell = [](const dbl::HCell& m) { return mat::wrapCell(famCellToMat(m)); };
  f.onSquare = [](const dbl::Square& s) {
    return mat::wrapSquare(famCellToMat(s.src), famCellToMat(s.tgt), frVertOf(s.la),
                           frVertOf(s.ra), famMapsOf(frArrOf(s)));
  };
  f.compCmp = [](const dbl::HCell& m, const dbl::HCell& n) {
    const dbl::Instance& fr = frFamInstance();
    dbl::HCell comp = fr.hCompose(m, n);
    mat::MatCell mc = mat::matCompose(famCellToMat(m), famCellToMat(n));
    mat::MatCell tc = famCellToMat(comp);
    // entrywise, both sides list middle-index-major pairs in the same order
    std::vector<FinFn> maps;
    maps.reserve(mc.entries.size());
    for (std::size_t i = 0; i < mc.entries.size(); ++i)
      maps.push_back(iotaFn(mc.entries[i], tc.entries[i]));
    return mat::wrapSquare(mc, tc, FinFn::identity(mc.rows), FinFn::identity(mc.cols),
                           std::move(maps));
  };
  f.unitCmp = [](const dbl::Obj& a) {
    const FinSet& s = frObjOf(a);
    dbl::HCell u = frFamInstance().hUnit(a);
    mat::MatCell mu = mat::matUnit(s);
    mat::MatCell tu = famCellToMat(u);
    std::vector<FinFn> maps;
    maps.reserve(mu.entries.size());
    for (std::size_t i = 0; i < mu.entries.size(); ++i)
      maps.push_back(iotaFn(mu.entries[i], tu.entries[i]));
    return mat::wrapSquare(mu, tu, FinFn::identity(s), FinFn::identity(s), std::move(maps));
  };
  return f;
}

laws::EquivalenceChoices frFamToMatChoices() {
  laws::EquivalenceChoices ch;
  ch.objInverse = [](const dbl::Obj& c) -> std::optional<dbl::Obj> {
    return frObj(mat::objOf(c));
  };
  ch.objIso = [](const dbl::Obj& c) -> std::optional<dbl::Vert> {
    return mat::wrapVert(FinFn::identity(mat::objOf(c)));
  };
  ch.cellInverse = [](const dbl::HCell& n) -> std::optional<dbl::HCell> {
    const mat::MatCell& m = mat::cellOf(n);
    return frCell(famFibration(), m.rows, m.cols,
                  makeFamObject(prodSet(m.rows, m.cols), m.entries));
  };
  ch.cellIso = [](const dbl::HCell& n) -> std::optional<dbl::Square> {
    return mat::matInstance().sqId(n);
  };
  return ch;
}

}  // namespace framedkit::fib
