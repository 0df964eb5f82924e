#include "framedkit/span.hpp"

#include <algorithm>

#include "framedkit/jsonio.hpp"

namespace framedkit::span {

using dbl::Extension;
using dbl::HCell;
using dbl::Instance;
using dbl::LocalCoeq;
using dbl::Obj;
using dbl::Restriction;
using dbl::Square;
using dbl::Vert;
using fin::InputError;
using nlohmann::json;

namespace {

template <typename T>
const T& unwrap(const std::any& a, const char* what) {
  const T* p = std::any_cast<T>(&a);
  if (!p) throw InputError(std::string("payload is not a ") + what);
  return *p;
}

void checkLegs(const SpanCell& m, const char* what) {
  if (m.l.dom != m.apex || m.l.cod != m.lf)
    throw InputError(std::string(what) + ": left leg does not match apex and frame");
  if (m.r.dom != m.apex || m.r.cod != m.rf)
    throw InputError(std::string(what) + ": right leg does not match apex and frame");
}

}  // namespace

SpanCell makeSpan(FinSet lf, FinSet rf, FinSet apex, FinFn l, FinFn r) {
  SpanCell m{std::move(lf), std::move(rf), std::move(apex), std::move(l), std::move(r)};
  checkLegs(m, "span");
  return m;
}

SpanCell spanUnit(const FinSet& a) {
  return {a, a, a, FinFn::identity(a), FinFn::identity(a)};
}

SpanCell spanCompose(const SpanCell& m, const SpanCell& n) {
  if (m.rf != n.lf)
    throw InputError("span composition: right frame of the first span differs from the left "
                     "frame of the second");
  fin::SpanDiagram pb = fin::pullback(m.r, n.l);
  return {m.lf, n.rf, pb.apex, pb.p1.then(m.l), pb.p2.then(n.r)};
}

SpanCell spanInvolute(const SpanCell& m) { return {m.rf, m.lf, m.apex, m.r, m.l}; }

SpanCell externalProduct(const SpanCell& m, const SpanCell& n) {
  fin::SpanDiagram lf = fin::product(m.lf, n.lf);
  fin::SpanDiagram rf = fin::product(m.rf, n.rf);
  fin::SpanDiagram ap = fin::product(m.apex, n.apex);
  auto half = [](const FinFn& f, const FinFn& g, const fin::SpanDiagram& src,
                 const fin::SpanDiagram& dst) {
    return FinFn::make(src.apex, dst.apex, [&](const std::string& x) {
      auto p = fin::splitPair(x);
      return fin::pairLabel(f.at(p->first), g.at(p->second));
    });
  };
  return {lf.apex, rf.apex, ap.apex, half(m.l, n.l, ap, lf), half(m.r, n.r, ap, rf)};
}

SpanCell graphSpan(const FinFn& f) { return {f.dom, f.cod, f.dom, FinFn::identity(f.dom), f}; }

SpanCell cographSpan(const FinFn& f) { return {f.cod, f.dom, f.dom, f, FinFn::identity(f.dom)}; }

bool Relation::contains(const std::string& a, const std::string& b) const {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

namespace {

// canonical order: by left-frame index, then right-frame index
void normalizeRel(Relation& r) {
  std::sort(r.pairs.begin(), r.pairs.end(),
            [&](const std::pair<std::string, std::string>& x,
                const std::pair<std::string, std::string>& y) {
              auto kx = std::make_pair(r.lf.indexOf(x.first), r.rf.indexOf(x.second));
              auto ky = std::make_pair(r.lf.indexOf(y.first), r.rf.indexOf(y.second));
              return kx < ky;
            });
  r.pairs.erase(std::unique(r.pairs.begin(), r.pairs.end()), r.pairs.end());
}

}  // namespace

Relation toRelation(const SpanCell& m) {
  Relation r{m.lf, m.rf, {}};
  for (std::size_t i = 0; i < m.apex.size(); ++i)
    r.pairs.emplace_back(m.lf.elems[m.l.apply(i)], m.rf.elems[m.r.apply(i)]);
  normalizeRel(r);
  return r;
}

Relation relCompose(const Relation& m, const Relation& n) {
  if (m.rf != n.lf) throw InputError("relation composition: middle frames differ");
  Relation r{m.lf, n.rf, {}};
  for (const auto& [a, b] : m.pairs)
    for (const auto& [b2, c] : n.pairs)
      if (b == b2) r.pairs.emplace_back(a, c);
  normalizeRel(r);
  return r;
}

Relation relUnit(const FinSet& a) {
  Relation r{a, a, {}};
  for (const auto& x : a.elems) r.pairs.emplace_back(x, x);
  return r;
}

// ---- the Span(FinSet) instance -------------------------------------------

namespace {

struct SpanSq {
  SpanCell src, tgt;
  FinFn f, g, h;
};

Obj oWrap(FinSet a) { return Obj{std::move(a)}; }

Vert vWrap(FinFn f) {
  Obj d = oWrap(f.dom), c = oWrap(f.cod);
  return Vert{std::move(f), std::move(d), std::move(c)};
}

HCell hWrap(SpanCell m) {
  Obj l = oWrap(m.lf), r = oWrap(m.rf);
  return HCell{std::move(m), std::move(l), std::move(r)};
}

Square sWrap(SpanCell src, SpanCell tgt, FinFn f, FinFn g, FinFn h) {
  if (f.dom != src.lf || f.cod != tgt.lf)
    throw InputError("span square: left frame map does not connect the left frames");
  if (g.dom != src.rf || g.cod != tgt.rf)
    throw InputError("span square: right frame map does not connect the right frames");
  if (h.dom != src.apex || h.cod != tgt.apex)
    throw InputError("span square: apex map does not connect the apexes");
  if (h.then(tgt.l) != src.l.then(f))
    throw InputError("span square: left leg square does not commute");
  if (h.then(tgt.r) != src.r.then(g))
    throw InputError("span square: right leg square does not commute");
  HCell s = hWrap(src), t = hWrap(tgt);
  Vert vf = vWrap(f), vg = vWrap(g);
  return Square{SpanSq{std::move(src), std::move(tgt), std::move(f), std::move(g), std::move(h)},
                std::move(s), std::move(t), std::move(vf), std::move(vg)};
}

const SpanSq& sq(const Square& s) { return unwrap<SpanSq>(s.v, "span square"); }

class SpanInstance final : public Instance {
 public:
  std::string name() const override { return "span"; }

  bool objEq(const Obj& a, const Obj& b) const override { return setOf(a) == setOf(b); }
  bool vertEq(const Vert& f, const Vert& g) const override { return fnOf(f) == fnOf(g); }
  bool hcellEq(const HCell& m, const HCell& n) const override { return spanOf(m) == spanOf(n); }
  bool squareEq(const Square& a, const Square& b) const override {
    const SpanSq &x = sq(a), &y = sq(b);
    return x.src == y.src && x.tgt == y.tgt && x.f == y.f && x.g == y.g && x.h == y.h;
  }

  Vert vId(const Obj& a) const override { return vWrap(FinFn::identity(setOf(a))); }

  Vert vCompose(const Vert& f, const Vert& g) const override {
    return vWrap(fnOf(f).then(fnOf(g)));
  }

  HCell hUnit(const Obj& a) const override { return hWrap(spanUnit(setOf(a))); }

  HCell hCompose(const HCell& m, const HCell& n) const override {
    return hWrap(spanCompose(spanOf(m), spanOf(n)));
  }

  Square sqId(const HCell& m) const override {
    const SpanCell& s = spanOf(m);
    return sWrap(s, s, FinFn::identity(s.lf), FinFn::identity(s.rf), FinFn::identity(s.apex));
  }

  Square sqUnit(const Vert& f) const override {
    const FinFn& fn = fnOf(f);
    return sWrap(spanUnit(fn.dom), spanUnit(fn.cod), fn, fn, fn);
  }

  Square vCompose2(const Square& a, const Square& b) const override {
    const SpanSq &x = sq(a), &y = sq(b);
    if (!(x.tgt == y.src))
      throw InputError("vertical pasting: target of the first square differs from the source "
                       "of the second");
    return sWrap(x.src, y.tgt, x.f.then(y.f), x.g.then(y.g), x.h.then(y.h));
  }

  Square hCompose2(const Square& a, const Square& b) const override {
    const SpanSq &x = sq(a), &y = sq(b);
    if (x.g != y.f)
      throw InputError("horizontal pasting: the squares do not share the middle frame map");
    SpanCell src = spanCompose(x.src, y.src);
    SpanCell tgt = spanCompose(x.tgt, y.tgt);
    FinFn h = FinFn::make(src.apex, tgt.apex, [&](const std::string& lbl) {
      auto p = fin::splitPair(lbl);
      return fin::pairLabel(x.h.at(p->first), y.h.at(p->second));
    });
    return sWrap(std::move(src), std::move(tgt), x.f, y.g, std::move(h));
  }

  Square assoc(const HCell& mc, const HCell& nc, const HCell& pc) const override {
    const SpanCell &m = spanOf(mc), &n = spanOf(nc), &p = spanOf(pc);
    SpanCell src = spanCompose(spanCompose(m, n), p);
    SpanCell tgt = spanCompose(m, spanCompose(n, p));
    FinFn h = FinFn::make(src.apex, tgt.apex, [](const std::string& lbl) {
      auto outer = fin::splitPair(lbl);
      auto inner = fin::splitPair(outer->first);
      return fin::pairLabel(inner->first, fin::pairLabel(inner->second, outer->second));
    });
    return sWrap(std::move(src), std::move(tgt), FinFn::identity(m.lf), FinFn::identity(p.rf),
                 std::move(h));
  }

  Square lunit(const HCell& mc) const override {
    const SpanCell& m = spanOf(mc);
    SpanCell src = spanCompose(spanUnit(m.lf), m);
    FinFn h = FinFn::make(src.apex, m.apex,
                          [](const std::string& lbl) { return fin::splitPair(lbl)->second; });
    return sWrap(std::move(src), m, FinFn::identity(m.lf), FinFn::identity(m.rf), std::move(h));
  }

  Square runit(const HCell& mc) const override {
    const SpanCell& m = spanOf(mc);
    SpanCell src = spanCompose(m, spanUnit(m.rf));
    FinFn h = FinFn::make(src.apex, m.apex,
                          [](const std::string& lbl) { return fin::splitPair(lbl)->first; });
    return sWrap(std::move(src), m, FinFn::identity(m.lf), FinFn::identity(m.rf), std::move(h));
  }

  std::optional<Square> invert(const Square& a) const override {
    const SpanSq& x = sq(a);
    if (!x.f.bijective() || !x.g.bijective() || !x.h.bijective()) return std::nullopt;
    return sWrap(x.tgt, x.src, x.f.inverse(), x.g.inverse(), x.h.inverse());
  }

  Restriction restrictCell(const Vert& f, const HCell& m, const Vert& g) const override {
    return spanRestrict(fnOf(f), spanOf(m), fnOf(g));
  }

  Extension extendCell(const Vert& f, const HCell& m, const Vert& g) const override {
    return spanExtend(fnOf(f), spanOf(m), fnOf(g));
  }

  std::optional<Square> factorCart(const Square& cart, const Square& cand, const Vert& uv,
                                   const Vert& vv) const override {
    const SpanSq &w = sq(cart), &c = sq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.tgt == w.tgt))
      throw InputError("cartesian factorization: the squares do not share a target");
    if (u.dom != c.src.lf || u.cod != w.src.lf || v.dom != c.src.rf || v.cod != w.src.rf)
      throw InputError("cartesian factorization: frame maps do not connect the sources");
    if (c.f != u.then(w.f) || c.g != v.then(w.g))
      throw InputError("cartesian factorization: frame maps do not factor the candidate");
    std::vector<std::size_t> pick(c.src.apex.size());
    for (std::size_t i = 0; i < c.src.apex.size(); ++i) {
      std::size_t hits = 0, found = 0;
      for (std::size_t j = 0; j < w.src.apex.size(); ++j) {
        if (w.h.apply(j) != c.h.apply(i)) continue;
        if (w.src.l.apply(j) != u.apply(c.src.l.apply(i))) continue;
        if (w.src.r.apply(j) != v.apply(c.src.r.apply(i))) continue;
        found = j;
        ++hits;
      }
      if (hits != 1) return std::nullopt;
      pick[i] = found;
    }
    FinFn h{c.src.apex, w.src.apex, std::move(pick)};
    return sWrap(c.src, w.src, u, v, std::move(h));
  }

  std::optional<Square> factorOpcart(const Square& opcart, const Square& cand, const Vert& uv,
                                     const Vert& vv) const override {
    const SpanSq &w = sq(opcart), &c = sq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.src == w.src))
      throw InputError("opcartesian factorization: the squares do not share a source");
    if (u.dom != w.tgt.lf || u.cod != c.tgt.lf || v.dom != w.tgt.rf || v.cod != c.tgt.rf)
      throw InputError("opcartesian factorization: frame maps do not connect the targets");
    if (c.f != w.f.then(u) || c.g != w.g.then(v))
      throw InputError("opcartesian factorization: frame maps do not factor the candidate");
    // forced on the image of w.h; leg-constrained elsewhere
    const std::size_t none = c.tgt.apex.size();
    std::vector<std::size_t> forced(w.tgt.apex.size(), none);
    for (std::size_t i = 0; i < w.src.apex.size(); ++i) {
      std::size_t j = w.h.apply(i), val = c.h.apply(i);
      if (forced[j] == none)
        forced[j] = val;
      else if (forced[j] != val)
        return std::nullopt;
    }
    std::vector<std::size_t> pick(w.tgt.apex.size());
    for (std::size_t j = 0; j < w.tgt.apex.size(); ++j) {
      auto legsOk = [&](std::size_t y) {
        return c.tgt.l.apply(y) == u.apply(w.tgt.l.apply(j)) &&
               c.tgt.r.apply(y) == v.apply(w.tgt.r.apply(j));
      };
      if (forced[j] != none) {
        if (!legsOk(forced[j])) return std::nullopt;
        pick[j] = forced[j];
        continue;
      }
      std::size_t hits = 0, found = 0;
      for (std::size_t y = 0; y < c.tgt.apex.size(); ++y)
        if (legsOk(y)) {
          found = y;
          ++hits;
        }
      if (hits != 1) return std::nullopt;
      pick[j] = found;
    }
    FinFn h{w.tgt.apex, c.tgt.apex, std::move(pick)};
    return sWrap(w.tgt, c.tgt, u, v, std::move(h));
  }

  void forEachSquare(const HCell& srcc, const HCell& tgtc, const Vert& fv, const Vert& gv,
                     const std::function<bool(const Square&)>& cb) const override {
    const SpanCell &src = spanOf(srcc), &tgt = spanOf(tgtc);
    const FinFn &f = fnOf(fv), &g = fnOf(gv);
    if (f.dom != src.lf || f.cod != tgt.lf || g.dom != src.rf || g.cod != tgt.rf)
      throw InputError("square enumeration: frame maps do not connect the cells");
    std::vector<std::vector<std::size_t>> allowed(src.apex.size());
    for (std::size_t i = 0; i < src.apex.size(); ++i)
      for (std::size_t y = 0; y < tgt.apex.size(); ++y)
        if (tgt.l.apply(y) == f.apply(src.l.apply(i)) &&
            tgt.r.apply(y) == g.apply(src.r.apply(i)))
          allowed[i].push_back(y);
    std::uint64_t budget = fin::searchBudget(), count = 1;
    for (const auto& opts : allowed) {
      if (opts.empty()) return;
      if (count > budget / std::max<std::uint64_t>(opts.size(), 1))
        throw fin::BudgetError("square enumeration between spans exceeds the search budget");
      count *= opts.size();
    }
    std::vector<std::size_t> idx(allowed.size(), 0);
    while (true) {
      std::vector<std::size_t> tab(allowed.size());
      for (std::size_t i = 0; i < allowed.size(); ++i) tab[i] = allowed[i][idx[i]];
      if (!cb(sWrap(src, tgt, f, g, FinFn{src.apex, tgt.apex, std::move(tab)}))) return;
      std::size_t k = allowed.size();
      while (k > 0 && ++idx[k - 1] == allowed[k - 1].size()) idx[--k] = 0;
      if (k == 0) return;
    }
  }

  void forEachVert(const Obj& a, const Obj& b,
                   const std::function<bool(const Vert&)>& cb) const override {
    fin::forEachFunction(setOf(a), setOf(b),
                         [&](const FinFn& f) { return cb(vWrap(f)); });
  }

  void forEachHCell(const Obj& a, const Obj& b, std::size_t maxSize,
                    const std::function<bool(const HCell&)>& cb) const override {
    const FinSet &lf = setOf(a), &rf = setOf(b);
    const std::size_t legs = lf.size() * rf.size();
    const std::uint64_t budget = fin::searchBudget();
    std::uint64_t count = 0;
    for (std::size_t k = 0; k <= maxSize; ++k) {
      if (k > 0 && legs == 0) break;
      std::vector<std::string> elems;
      for (std::size_t i = 0; i < k; ++i) elems.push_back("x" + std::to_string(i));
      FinSet apex = fin::makeSet("X" + std::to_string(k), std::move(elems));
      std::vector<std::size_t> digits(k, 0);
      while (true) {
        if (++count > budget)
          throw fin::BudgetError("span enumeration exceeds the search budget");
        std::vector<std::size_t> lt(k), rt(k);
        for (std::size_t i = 0; i < k; ++i) {
          lt[i] = digits[i] / rf.size();
          rt[i] = digits[i] % rf.size();
        }
        if (!cb(hWrap(SpanCell{lf, rf, apex, FinFn{apex, lf, std::move(lt)},
                               FinFn{apex, rf, std::move(rt)}})))
          return;
        std::size_t pos = 0;
        while (pos < k && ++digits[pos] == legs) digits[pos++] = 0;
        if (pos == k) break;
      }
    }
  }

  std::optional<Square> findGlobularIso(const HCell& mc, const HCell& nc) const override {
    const SpanCell &m = spanOf(mc), &n = spanOf(nc);
    if (m.lf != n.lf || m.rf != n.rf) return std::nullopt;
    auto b = fin::findBijection(m.apex, n.apex, {{m.l, n.l}, {m.r, n.r}});
    if (!b) return std::nullopt;
    return sWrap(m, n, FinFn::identity(m.lf), FinFn::identity(m.rf), *b);
  }

  LocalCoeq localCoequalizer(const Square& a, const Square& b) const override {
    const SpanSq &x = sq(a), &y = sq(b);
    if (!(x.src == y.src) || !(x.tgt == y.tgt))
      throw InputError("local coequalizer: the squares are not parallel");
    FinFn idl = FinFn::identity(x.src.lf), idr = FinFn::identity(x.src.rf);
    if (x.f != idl || x.g != idr || y.f != idl || y.g != idr)
      throw InputError("local coequalizer: the squares must be globular");
    fin::QuotientMap q = fin::coequalizer(x.h, y.h);
    FinSet quot = q.quotient();
    const SpanCell& n = x.tgt;
    // members of a class share both legs, so the legs descend
    for (const auto& cls : q.classes)
      for (const auto& mem : cls)
        if (n.l.at(mem) != n.l.at(cls.front()) || n.r.at(mem) != n.r.at(cls.front()))
          throw InputError("local coequalizer: legs do not descend to the quotient");
    FinFn ql = FinFn::make(quot, n.lf, [&](const std::string& lbl) {
      return n.l.at(*fin::stripTag("class", lbl));
    });
    FinFn qr = FinFn::make(quot, n.rf, [&](const std::string& lbl) {
      return n.r.at(*fin::stripTag("class", lbl));
    });
    SpanCell cell{n.lf, n.rf, quot, std::move(ql), std::move(qr)};
    Square proj = sWrap(n, cell, FinFn::identity(n.lf), FinFn::identity(n.rf), q.projection());
    return LocalCoeq{hWrap(std::move(cell)), std::move(proj)};
  }

  std::optional<Square> factorCoeq(const LocalCoeq& q, const Square& cand, const Vert& uv,
                                   const Vert& vv) const override {
    const SpanSq &p = sq(q.proj), &c = sq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.src == p.src))
      throw InputError("coequalizer descent: the candidate does not start at the quotiented "
                       "cell");
    if (c.f != u || c.g != v)
      throw InputError("coequalizer descent: frame maps differ from the candidate's");
    const SpanCell& quot = spanOf(q.cell);
    std::vector<std::size_t> tab(quot.apex.size());
    for (std::size_t j = 0; j < quot.apex.size(); ++j) tab[j] = c.tgt.apex.size();
    for (std::size_t i = 0; i < p.src.apex.size(); ++i) {
      std::size_t j = p.h.apply(i), val = c.h.apply(i);
      if (tab[j] == c.tgt.apex.size())
        tab[j] = val;
      else if (tab[j] != val)
        return std::nullopt;
    }
    FinFn h{quot.apex, c.tgt.apex, std::move(tab)};
    return sWrap(quot, c.tgt, u, v, std::move(h));
  }

  Obj sampleObj(fin::Rng& rng, std::size_t maxSize) const override {
    std::size_t n = rng.below(maxSize + 1);
    std::size_t id = rng.below(10000);
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < n; ++i)
      elems.push_back("e" + std::to_string(i) + "_" + std::to_string(id));
    return oWrap(fin::makeSet("S" + std::to_string(id), std::move(elems)));
  }

  std::optional<Vert> sampleVert(fin::Rng& rng, const Obj& dom, const Obj& cod) const override {
    const FinSet &d = setOf(dom), &c = setOf(cod);
    if (c.empty() && !d.empty()) return std::nullopt;
    std::vector<std::size_t> tab(d.size());
    for (auto& t : tab) t = rng.below(c.size());
    return vWrap(FinFn{d, c, std::move(tab)});
  }

  HCell sampleHCell(fin::Rng& rng, const Obj& lfo, const Obj& rfo,
                    std::size_t maxSize) const override {
    const FinSet &lf = setOf(lfo), &rf = setOf(rfo);
    std::size_t n = (lf.empty() || rf.empty()) ? 0 : rng.below(maxSize + 1);
    std::size_t id = rng.below(10000);
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < n; ++i)
      elems.push_back("m" + std::to_string(i) + "_" + std::to_string(id));
    FinSet apex = fin::makeSet("X" + std::to_string(id), std::move(elems));
    std::vector<std::size_t> lt(n), rt(n);
    for (auto& t : lt) t = rng.below(lf.size());
    for (auto& t : rt) t = rng.below(rf.size());
    return hWrap(SpanCell{lf, rf, apex, FinFn{apex, lf, std::move(lt)},
                          FinFn{apex, rf, std::move(rt)}});
  }

  std::optional<Square> sampleSquare(fin::Rng& rng, const HCell& srcc, const HCell& tgtc,
                                     const Vert& fv, const Vert& gv) const override {
    const SpanCell &src = spanOf(srcc), &tgt = spanOf(tgtc);
    const FinFn &f = fnOf(fv), &g = fnOf(gv);
    std::vector<std::size_t> tab(src.apex.size());
    for (std::size_t i = 0; i < src.apex.size(); ++i) {
      std::vector<std::size_t> opts;
      for (std::size_t y = 0; y < tgt.apex.size(); ++y)
        if (tgt.l.apply(y) == f.apply(src.l.apply(i)) &&
            tgt.r.apply(y) == g.apply(src.r.apply(i)))
          opts.push_back(y);
      if (opts.empty()) return std::nullopt;
      tab[i] = opts[rng.below(opts.size())];
    }
    return sWrap(src, tgt, f, g, FinFn{src.apex, tgt.apex, std::move(tab)});
  }

  json objJson(const Obj& a) const override { return io::setJson(setOf(a)); }
  json vertJson(const Vert& f) const override { return io::fnJson(fnOf(f)); }

  json hcellJson(const HCell& m) const override {
    const SpanCell& s = spanOf(m);
    return json{{"apex", io::setJson(s.apex)},
                {"left", io::fnJson(s.l)},
                {"right", io::fnJson(s.r)}};
  }

  json squareJson(const Square& a) const override {
    const SpanSq& x = sq(a);
    return json{{"src", hcellJson(HCell{x.src, {}, {}})},
                {"tgt", hcellJson(HCell{x.tgt, {}, {}})},
                {"left", io::fnJson(x.f)},
                {"right", io::fnJson(x.g)},
                {"map", io::fnJson(x.h)}};
  }

 private:
  static const FinSet& setOf(const Obj& a) { return unwrap<FinSet>(a.v, "finite set"); }
  static const FinFn& fnOf(const Vert& f) { return unwrap<FinFn>(f.v, "function"); }
  static const SpanCell& spanOf(const HCell& m) { return unwrap<SpanCell>(m.v, "span"); }
};

}  // namespace

Restriction spanRestrict(const FinFn& f, const SpanCell& m, const FinFn& g) {
  if (f.cod != m.lf || g.cod != m.rf)
    throw InputError("span restriction: frame maps must land in the span's frames");
  fin::SpanDiagram fr = fin::product(f.dom, g.dom);
  fin::SpanDiagram ab = fin::product(m.lf, m.rf);
  FinFn fxg = FinFn::make(fr.apex, ab.apex, [&](const std::string& lbl) {
    auto p = fin::splitPair(lbl);
    return fin::pairLabel(f.at(p->first), g.at(p->second));
  });
  FinFn legs = FinFn::make(m.apex, ab.apex, [&](const std::string& x) {
    return fin::pairLabel(m.l.at(x), m.r.at(x));
  });
  fin::SpanDiagram pb = fin::pullback(fxg, legs);
  FinFn l = pb.p1.then(fr.p1);
  FinFn r = pb.p1.then(fr.p2);
  SpanCell cell{f.dom, g.dom, pb.apex, std::move(l), std::move(r)};
  Square cart = sWrap(cell, m, f, g, pb.p2);
  return Restriction{hWrap(std::move(cell)), std::move(cart)};
}

Extension spanExtend(const FinFn& f, const SpanCell& m, const FinFn& g) {
  if (f.dom != m.lf || g.dom != m.rf)
    throw InputError("span extension: frame maps must start at the span's frames");
  SpanCell cell{f.cod, g.cod, m.apex, m.l.then(f), m.r.then(g)};
  Square opcart = sWrap(m, cell, f, g, FinFn::identity(m.apex));
  return Extension{hWrap(std::move(cell)), std::move(opcart)};
}

const Instance& spanInstance() {
  static const SpanInstance inst;
  return inst;
}

Obj wrapObj(FinSet a) { return oWrap(std::move(a)); }
Vert wrapVert(FinFn f) { return vWrap(std::move(f)); }
HCell wrapCell(SpanCell m) {
  checkLegs(m, "span");
  return hWrap(std::move(m));
}
Square wrapSquare(SpanCell src, SpanCell tgt, FinFn f, FinFn g, FinFn h) {
  return sWrap(std::move(src), std::move(tgt), std::move(f), std::move(g), std::move(h));
}
const FinSet& objOf(const Obj& a) { return unwrap<FinSet>(a.v, "finite set"); }
const FinFn& vertOf(const Vert& f) { return unwrap<FinFn>(f.v, "function"); }
const SpanCell& cellOf(const HCell& m) { return unwrap<SpanCell>(m.v, "span"); }
const FinFn& mapOf(const Square& s) { return sq(s).h; }

// ---- the Rel instance ------------------------------------------------------
//
// Rel is thin: between any two parallel frames of relations there is at most
// one square, so every coherence cell is an equality and the payload carries
// no data beyond its boundary.

namespace {

struct RelSq {
  Relation src, tgt;
  FinFn f, g;
};

HCell hWrapRel(Relation r) {
  Obj l = oWrap(r.lf), rr = oWrap(r.rf);
  return HCell{std::move(r), std::move(l), std::move(rr)};
}

bool relImplies(const Relation& src, const Relation& tgt, const FinFn& f, const FinFn& g) {
  for (const auto& [a, b] : src.pairs)
    if (!tgt.contains(f.at(a), g.at(b))) return false;
  return true;
}

Square sWrapRel(Relation src, Relation tgt, FinFn f, FinFn g) {
  if (f.dom != src.lf || f.cod != tgt.lf || g.dom != src.rf || g.cod != tgt.rf)
    throw InputError("relation square: frame maps do not connect the relations");
  if (!relImplies(src, tgt, f, g))
    throw InputError("relation square: a related pair is not carried to a related pair");
  HCell s = hWrapRel(src), t = hWrapRel(tgt);
  Vert vf = vWrap(f), vg = vWrap(g);
  return Square{RelSq{std::move(src), std::move(tgt), std::move(f), std::move(g)}, std::move(s),
                std::move(t), std::move(vf), std::move(vg)};
}

const RelSq& rsq(const Square& s) { return unwrap<RelSq>(s.v, "relation square"); }

class RelInstance final : public Instance {
 public:
  std::string name() const override { return "rel"; }

  bool objEq(const Obj& a, const Obj& b) const override { return setOf(a) == setOf(b); }
  bool vertEq(const Vert& f, const Vert& g) const override { return fnOf(f) == fnOf(g); }
  bool hcellEq(const HCell& m, const HCell& n) const override { return relO(m) == relO(n); }
  bool squareEq(const Square& a, const Square& b) const override {
    const RelSq &x = rsq(a), &y = rsq(b);
    return x.src == y.src && x.tgt == y.tgt && x.f == y.f && x.g == y.g;
  }

  Vert vId(const Obj& a) const override { return vWrap(FinFn::identity(setOf(a))); }
  Vert vCompose(const Vert& f, const Vert& g) const override {
    return vWrap(fnOf(f).then(fnOf(g)));
  }

  HCell hUnit(const Obj& a) const override { return hWrapRel(relUnit(setOf(a))); }
  HCell hCompose(const HCell& m, const HCell& n) const override {
    return hWrapRel(relCompose(relO(m), relO(n)));
  }

  Square sqId(const HCell& m) const override {
    const Relation& r = relO(m);
    return sWrapRel(r, r, FinFn::identity(r.lf), FinFn::identity(r.rf));
  }

  Square sqUnit(const Vert& f) const override {
    const FinFn& fn = fnOf(f);
    return sWrapRel(relUnit(fn.dom), relUnit(fn.cod), fn, fn);
  }

  Square vCompose2(const Square& a, const Square& b) const override {
    const RelSq &x = rsq(a), &y = rsq(b);
    if (!(x.tgt == y.src))
      throw InputError("vertical pasting: target of the first square differs from the source "
                       "of the second");
    return sWrapRel(x.src, y.tgt, x.f.then(y.f), x.g.then(y.g));
  }

  Square hCompose2(const Square& a, const Square& b) const override {
    const RelSq &x = rsq(a), &y = rsq(b);
    if (x.g != y.f)
      throw InputError("horizontal pasting: the squares do not share the middle frame map");
    return sWrapRel(relCompose(x.src, y.src), relCompose(x.tgt, y.tgt), x.f, y.g);
  }

  // composition of relations is strictly associative and unital, so the
  // coherence cells are identities
  Square assoc(const HCell& m, const HCell& n, const HCell& p) const override {
    Relation lhs = relCompose(relCompose(relO(m), relO(n)), relO(p));
    Relation rhs = relCompose(relO(m), relCompose(relO(n), relO(p)));
    return sWrapRel(std::move(lhs), std::move(rhs), FinFn::identity(relO(m).lf),
                    FinFn::identity(relO(p).rf));
  }

  Square lunit(const HCell& m) const override {
    const Relation& r = relO(m);
    return sWrapRel(relCompose(relUnit(r.lf), r), r, FinFn::identity(r.lf),
                    FinFn::identity(r.rf));
  }

  Square runit(const HCell& m) const override {
    const Relation& r = relO(m);
    return sWrapRel(relCompose(r, relUnit(r.rf)), r, FinFn::identity(r.lf),
                    FinFn::identity(r.rf));
  }

  std::optional<Square> invert(const Square& a) const override {
    const RelSq& x = rsq(a);
    if (!x.f.bijective() || !x.g.bijective()) return std::nullopt;
    FinFn fi = x.f.inverse(), gi = x.g.inverse();
    if (!relImplies(x.tgt, x.src, fi, gi)) return std::nullopt;
    return sWrapRel(x.tgt, x.src, std::move(fi), std::move(gi));
  }

  Restriction restrictCell(const Vert& fv, const HCell& m, const Vert& gv) const override {
    const FinFn &f = fnOf(fv), &g = fnOf(gv);
    const Relation& r = relO(m);
    if (f.cod != r.lf || g.cod != r.rf)
      throw InputError("relation restriction: frame maps must land in the relation's frames");
    Relation out{f.dom, g.dom, {}};
    for (const auto& a : f.dom.elems)
      for (const auto& b : g.dom.elems)
        if (r.contains(f.at(a), g.at(b))) out.pairs.emplace_back(a, b);
    Square cart = sWrapRel(out, r, f, g);
    return Restriction{hWrapRel(std::move(out)), std::move(cart)};
  }

  Extension extendCell(const Vert& fv, const HCell& m, const Vert& gv) const override {
    const FinFn &f = fnOf(fv), &g = fnOf(gv);
    const Relation& r = relO(m);
    if (f.dom != r.lf || g.dom != r.rf)
      throw InputError("relation extension: frame maps must start at the relation's frames");
    Relation out{f.cod, g.cod, {}};
    for (const auto& [a, b] : r.pairs) out.pairs.emplace_back(f.at(a), g.at(b));
    normalizeRel(out);
    Square opcart = sWrapRel(r, out, f, g);
    return Extension{hWrapRel(std::move(out)), std::move(opcart)};
  }

  std::optional<Square> factorCart(const Square& cart, const Square& cand, const Vert& uv,
                                   const Vert& vv) const override {
    const RelSq &w = rsq(cart), &c = rsq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.tgt == w.tgt))
      throw InputError("cartesian factorization: the squares do not share a target");
    if (c.f != u.then(w.f) || c.g != v.then(w.g))
      throw InputError("cartesian factorization: frame maps do not factor the candidate");
    if (!relImplies(c.src, w.src, u, v)) return std::nullopt;
    return sWrapRel(c.src, w.src, u, v);
  }

  std::optional<Square> factorOpcart(const Square& opcart, const Square& cand, const Vert& uv,
                                     const Vert& vv) const override {
    const RelSq &w = rsq(opcart), &c = rsq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.src == w.src))
      throw InputError("opcartesian factorization: the squares do not share a source");
    if (c.f != w.f.then(u) || c.g != w.g.then(v))
      throw InputError("opcartesian factorization: frame maps do not factor the candidate");
    if (!relImplies(w.tgt, c.tgt, u, v)) return std::nullopt;
    return sWrapRel(w.tgt, c.tgt, u, v);
  }

  void forEachSquare(const HCell& src, const HCell& tgt, const Vert& f, const Vert& g,
                     const std::function<bool(const Square&)>& cb) const override {
    if (relImplies(relO(src), relO(tgt), fnOf(f), fnOf(g)))
      cb(sWrapRel(relO(src), relO(tgt), fnOf(f), fnOf(g)));
  }

  void forEachVert(const Obj& a, const Obj& b,
                   const std::function<bool(const Vert&)>& cb) const override {
    spanInstance().forEachVert(a, b, cb);
  }

  std::optional<Square> findGlobularIso(const HCell& m, const HCell& n) const override {
    const Relation &x = relO(m), &y = relO(n);
    if (!(x == y)) return std::nullopt;
    return sWrapRel(x, y, FinFn::identity(x.lf), FinFn::identity(x.rf));
  }

  LocalCoeq localCoequalizer(const Square& a, const Square& b) const override {
    const RelSq &x = rsq(a), &y = rsq(b);
    if (!(x.src == y.src) || !(x.tgt == y.tgt))
      throw InputError("local coequalizer: the squares are not parallel");
    LocalCoeq out;
    out.cell = hWrapRel(x.tgt);
    out.proj = sWrapRel(x.tgt, x.tgt, FinFn::identity(x.tgt.lf), FinFn::identity(x.tgt.rf));
    return out;
  }

  std::optional<Square> factorCoeq(const LocalCoeq& q, const Square& cand, const Vert& u,
                                   const Vert& v) const override {
    const RelSq &p = rsq(q.proj), &c = rsq(cand);
    if (!(c.src == p.src))
      throw InputError("coequalizer descent: the candidate does not start at the quotiented "
                       "cell");
    if (c.f != fnOf(u) || c.g != fnOf(v))
      throw InputError("coequalizer descent: frame maps differ from the candidate's");
    return sWrapRel(p.tgt, c.tgt, fnOf(u), fnOf(v));
  }

  Obj sampleObj(fin::Rng& rng, std::size_t maxSize) const override {
    return spanInstance().sampleObj(rng, maxSize);
  }

  std::optional<Vert> sampleVert(fin::Rng& rng, const Obj& dom, const Obj& cod) const override {
    return spanInstance().sampleVert(rng, dom, cod);
  }

  HCell sampleHCell(fin::Rng& rng, const Obj& lfo, const Obj& rfo,
                    std::size_t) const override {
    const FinSet &lf = setOf(lfo), &rf = setOf(rfo);
    Relation r{lf, rf, {}};
    for (const auto& a : lf.elems)
      for (const auto& b : rf.elems)
        if (rng.next() & 1) r.pairs.emplace_back(a, b);
    return hWrapRel(std::move(r));
  }

  std::optional<Square> sampleSquare(fin::Rng&, const HCell& src, const HCell& tgt,
                                     const Vert& f, const Vert& g) const override {
    if (!relImplies(relO(src), relO(tgt), fnOf(f), fnOf(g))) return std::nullopt;
    return sWrapRel(relO(src), relO(tgt), fnOf(f), fnOf(g));
  }

  json objJson(const Obj& a) const override { return io::setJson(setOf(a)); }
  json vertJson(const Vert& f) const override { return io::fnJson(fnOf(f)); }

  json hcellJson(const HCell& m) const override {
    const Relation& r = relO(m);
    json pairs = json::array();
    for (const auto& [a, b] : r.pairs) pairs.push_back(json::array({a, b}));
    return json{{"leftFrame", io::setJson(r.lf)},
                {"rightFrame", io::setJson(r.rf)},
                {"pairs", pairs}};
  }

  json squareJson(const Square& a) const override {
    const RelSq& x = rsq(a);
    return json{{"src", hcellJson(hWrapRel(x.src))},
                {"tgt", hcellJson(hWrapRel(x.tgt))},
                {"left", io::fnJson(x.f)},
                {"right", io::fnJson(x.g)}};
  }

 private:
  static const FinSet& setOf(const Obj& a) { return unwrap<FinSet>(a.v, "finite set"); }
  static const FinFn& fnOf(const Vert& f) { return unwrap<FinFn>(f.v, "function"); }
  static const Relation& relO(const HCell& m) { return unwrap<Relation>(m.v, "relation"); }
};

}  // namespace

const Instance& relInstance() {
  static const RelInstance inst;
  return inst;
}

HCell wrapRel(Relation r) {
  normalizeRel(r);
  return hWrapRel(std::move(r));
}

const Relation& relOf(const HCell& m) { return unwrap<Relation>(m.v, "relation"); }

Square relSquare(Relation src, Relation tgt, FinFn f, FinFn g) {
  normalizeRel(src);
  normalizeRel(tgt);
  return sWrapRel(std::move(src), std::move(tgt), std::move(f), std::move(g));
}

}  // namespace framedkit::span
