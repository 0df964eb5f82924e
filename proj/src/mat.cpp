#include "framedkit/mat.hpp"

#include <algorithm>

#include "framedkit/jsonio.hpp"

namespace framedkit::mat {

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

std::string entryName(const std::string& base, const std::string& i, const std::string& j) {
  return base + "[" + i + "][" + j + "]";
}

}  // namespace

std::string sumLabel(const std::string& index, const std::string& inner) {
  return fin::taggedLabel("inl_" + index, inner);
}

std::optional<std::pair<std::size_t, std::string>> splitSum(const std::string& label,
                                                            const FinSet& indices) {
  for (std::size_t k = 0; k < indices.size(); ++k) {
    auto inner = fin::stripTag("inl_" + indices.elems[k], label);
    if (inner) return std::make_pair(k, *inner);
  }
  return std::nullopt;
}

MatCell makeMat(FinSet rows, FinSet cols, std::vector<FinSet> entries) {
  if (entries.size() != rows.size() * cols.size())
    throw InputError("matrix '" + rows.name + "x" + cols.name +
                     "': entry table does not cover rows x cols");
  return MatCell{std::move(rows), std::move(cols), std::move(entries)};
}

MatCell matUnit(const FinSet& a) {
  std::vector<FinSet> entries;
  entries.reserve(a.size() * a.size());
  for (const auto& i : a.elems)
    for (const auto& j : a.elems)
      entries.push_back(i == j ? fin::makeSet(entryName("U", i, j), {"star"})
                               : fin::makeSet(entryName("U", i, j), {}));
  return MatCell{a, a, std::move(entries)};
}

MatCell matCompose(const MatCell& m, const MatCell& n) {
  if (m.cols != n.rows)
    throw InputError("matrix composition: columns of the first differ from rows of the second");
  std::vector<FinSet> entries;
  entries.reserve(m.rows.size() * n.cols.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t j = 0; j < n.cols.size(); ++j) {
      std::vector<std::string> elems;
      for (std::size_t b = 0; b < m.cols.size(); ++b)
        for (const auto& x : m.at(i, b).elems)
          for (const auto& y : n.at(b, j).elems)
            elems.push_back(sumLabel(m.cols.elems[b], fin::pairLabel(x, y)));
      entries.push_back(fin::makeSet(entryName("C", m.rows.elems[i], n.cols.elems[j]),
                                     std::move(elems)));
    }
  return MatCell{m.rows, n.cols, std::move(entries)};
}

MatCell matTranspose(const MatCell& m) {
  std::vector<FinSet> entries;
  entries.reserve(m.entries.size());
  for (std::size_t j = 0; j < m.cols.size(); ++j)
    for (std::size_t i = 0; i < m.rows.size(); ++i) entries.push_back(m.at(i, j));
  return MatCell{m.cols, m.rows, std::move(entries)};
}

MatCell matExternalTensor(const MatCell& m, const MatCell& n) {
  FinSet rows = fin::product(m.rows, n.rows).apex;
  FinSet cols = fin::product(m.cols, n.cols).apex;
  std::vector<FinSet> entries;
  entries.reserve(rows.size() * cols.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t k = 0; k < n.rows.size(); ++k)
      for (std::size_t j = 0; j < m.cols.size(); ++j)
        for (std::size_t l = 0; l < n.cols.size(); ++l)
          entries.push_back(fin::product(m.at(i, j), n.at(k, l)).apex);
  return MatCell{std::move(rows), std::move(cols), std::move(entries)};
}

// ---- the Mat(FinSet) instance ---------------------------------------------

namespace {

struct MatSq {
  MatCell src, tgt;
  FinFn f, g;
  std::vector<FinFn> maps;  // row-major over src entries
};

Obj oWrap(FinSet a) { return Obj{std::move(a)}; }

Vert vWrap(FinFn f) {
  Obj d = oWrap(f.dom), c = oWrap(f.cod);
  return Vert{std::move(f), std::move(d), std::move(c)};
}

HCell hWrap(MatCell m) {
  Obj l = oWrap(m.rows), r = oWrap(m.cols);
  return HCell{std::move(m), std::move(l), std::move(r)};
}

Square sWrap(MatCell src, MatCell tgt, FinFn f, FinFn g, std::vector<FinFn> maps) {
  if (f.dom != src.rows || f.cod != tgt.rows)
    throw InputError("matrix square: row map does not connect the row sets");
  if (g.dom != src.cols || g.cod != tgt.cols)
    throw InputError("matrix square: column map does not connect the column sets");
  if (maps.size() != src.rows.size() * src.cols.size())
    throw InputError("matrix square: one component map per source entry is required");
  for (std::size_t i = 0; i < src.rows.size(); ++i)
    for (std::size_t j = 0; j < src.cols.size(); ++j) {
      const FinFn& h = maps[i * src.cols.size() + j];
      if (h.dom != src.at(i, j) || h.cod != tgt.at(f.apply(i), g.apply(j)))
        throw InputError("matrix square: component at (" + src.rows.elems[i] + "," +
                         src.cols.elems[j] + ") does not connect the entries");
    }
  HCell s = hWrap(src), t = hWrap(tgt);
  Vert vf = vWrap(f), vg = vWrap(g);
  return Square{MatSq{std::move(src), std::move(tgt), std::move(f), std::move(g),
                      std::move(maps)},
                std::move(s), std::move(t), std::move(vf), std::move(vg)};
}

const MatSq& sq(const Square& s) { return unwrap<MatSq>(s.v, "matrix square"); }

class MatInstance final : public Instance {
 public:
  std::string name() const override { return "mat"; }

  bool objEq(const Obj& a, const Obj& b) const override { return setOf(a) == setOf(b); }
  bool vertEq(const Vert& f, const Vert& g) const override { return fnOf(f) == fnOf(g); }
  bool hcellEq(const HCell& m, const HCell& n) const override { return matOf(m) == matOf(n); }
  bool squareEq(const Square& a, const Square& b) const override {
    const MatSq &x = sq(a), &y = sq(b);
    return x.src == y.src && x.tgt == y.tgt && x.f == y.f && x.g == y.g && x.maps == y.maps;
  }

  Vert vId(const Obj& a) const override { return vWrap(FinFn::identity(setOf(a))); }
  Vert vCompose(const Vert& f, const Vert& g) const override {
    return vWrap(fnOf(f).then(fnOf(g)));
  }

  HCell hUnit(const Obj& a) const override { return hWrap(matUnit(setOf(a))); }
  HCell hCompose(const HCell& m, const HCell& n) const override {
    return hWrap(matCompose(matOf(m), matOf(n)));
  }

  Square sqId(const HCell& mc) const override {
    const MatCell& m = matOf(mc);
    std::vector<FinFn> maps;
    maps.reserve(m.entries.size());
    for (const auto& e : m.entries) maps.push_back(FinFn::identity(e));
    return sWrap(m, m, FinFn::identity(m.rows), FinFn::identity(m.cols), std::move(maps));
  }

  Square sqUnit(const Vert& fv) const override {
    const FinFn& f = fnOf(fv);
    MatCell src = matUnit(f.dom), tgt = matUnit(f.cod);
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < f.dom.size(); ++i)
      for (std::size_t j = 0; j < f.dom.size(); ++j)
        maps.push_back(i == j && f.apply(i) == f.apply(j)
                           ? FinFn::constant(src.at(i, j), tgt.at(f.apply(i), f.apply(j)),
                                             "star")
                           : FinFn{src.at(i, j), tgt.at(f.apply(i), f.apply(j)), {}});
    return sWrap(std::move(src), std::move(tgt), f, f, std::move(maps));
  }

  Square vCompose2(const Square& a, const Square& b) const override {
    const MatSq &x = sq(a), &y = sq(b);
    if (!(x.tgt == y.src))
      throw InputError("vertical pasting: target of the first square differs from the source "
                       "of the second");
    std::vector<FinFn> maps;
    maps.reserve(x.maps.size());
    for (std::size_t i = 0; i < x.src.rows.size(); ++i)
      for (std::size_t j = 0; j < x.src.cols.size(); ++j)
        maps.push_back(x.maps[i * x.src.cols.size() + j].then(
            y.maps[x.f.apply(i) * y.src.cols.size() + x.g.apply(j)]));
    return sWrap(x.src, y.tgt, x.f.then(y.f), x.g.then(y.g), std::move(maps));
  }

  Square hCompose2(const Square& a, const Square& b) const override {
    const MatSq &x = sq(a), &y = sq(b);
    if (x.g != y.f)
      throw InputError("horizontal pasting: the squares do not share the middle frame map");
    MatCell src = matCompose(x.src, y.src);
    MatCell tgt = matCompose(x.tgt, y.tgt);
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < src.rows.size(); ++i)
      for (std::size_t j = 0; j < src.cols.size(); ++j) {
        maps.push_back(FinFn::make(
            src.at(i, j), tgt.at(x.f.apply(i), y.g.apply(j)), [&](const std::string& lbl) {
              auto s = splitSum(lbl, x.src.cols);
              auto p = fin::splitPair(s->second);
              std::size_t b = s->first;
              const FinFn& mx = x.maps[i * x.src.cols.size() + b];
              const FinFn& my = y.maps[b * y.src.cols.size() + j];
              return sumLabel(x.tgt.cols.elems[x.g.apply(b)],
                              fin::pairLabel(mx.at(p->first), my.at(p->second)));
            }));
      }
    return sWrap(std::move(src), std::move(tgt), x.f, y.g, std::move(maps));
  }

  Square assoc(const HCell& mc, const HCell& nc, const HCell& pc) const override {
    const MatCell &m = matOf(mc), &n = matOf(nc), &p = matOf(pc);
    MatCell src = matCompose(matCompose(m, n), p);
    MatCell tgt = matCompose(m, matCompose(n, p));
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < src.rows.size(); ++i)
      for (std::size_t j = 0; j < src.cols.size(); ++j)
        maps.push_back(FinFn::make(src.at(i, j), tgt.at(i, j), [&](const std::string& lbl) {
          auto outer = splitSum(lbl, p.rows);
          auto qp = fin::splitPair(outer->second);
          auto innerSum = splitSum(qp->first, m.cols);
          auto mn = fin::splitPair(innerSum->second);
          return sumLabel(m.cols.elems[innerSum->first],
                          fin::pairLabel(mn->first,
                                         sumLabel(p.rows.elems[outer->first],
                                                  fin::pairLabel(mn->second, qp->second))));
        }));
    return sWrap(std::move(src), std::move(tgt), FinFn::identity(m.rows),
                 FinFn::identity(p.cols), std::move(maps));
  }

  Square lunit(const HCell& mc) const override {
    const MatCell& m = matOf(mc);
    MatCell src = matCompose(matUnit(m.rows), m);
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      for (std::size_t j = 0; j < m.cols.size(); ++j)
        maps.push_back(FinFn::make(src.at(i, j), m.at(i, j), [&](const std::string& lbl) {
          auto s = splitSum(lbl, m.rows);
          return fin::splitPair(s->second)->second;
        }));
    return sWrap(std::move(src), m, FinFn::identity(m.rows), FinFn::identity(m.cols),
                 std::move(maps));
  }

  Square runit(const HCell& mc) const override {
    const MatCell& m = matOf(mc);
    MatCell src = matCompose(m, matUnit(m.cols));
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
      for (std::size_t j = 0; j < m.cols.size(); ++j)
        maps.push_back(FinFn::make(src.at(i, j), m.at(i, j), [&](const std::string& lbl) {
          auto s = splitSum(lbl, m.cols);
          return fin::splitPair(s->second)->first;
        }));
    return sWrap(std::move(src), m, FinFn::identity(m.rows), FinFn::identity(m.cols),
                 std::move(maps));
  }

  std::optional<Square> invert(const Square& a) const override {
    const MatSq& x = sq(a);
    if (!x.f.bijective() || !x.g.bijective()) return std::nullopt;
    for (const auto& h : x.maps)
      if (!h.bijective()) return std::nullopt;
    FinFn fi = x.f.inverse(), gi = x.g.inverse();
    std::vector<FinFn> maps(x.maps.size(), FinFn{});
    for (std::size_t i = 0; i < x.src.rows.size(); ++i)
      for (std::size_t j = 0; j < x.src.cols.size(); ++j)
        maps[x.f.apply(i) * x.tgt.cols.size() + x.g.apply(j)] =
            x.maps[i * x.src.cols.size() + j].inverse();
    return sWrap(x.tgt, x.src, std::move(fi), std::move(gi), std::move(maps));
  }

  Restriction restrictCell(const Vert& f, const HCell& m, const Vert& g) const override {
    return matRestrict(fnOf(f), matOf(m), fnOf(g));
  }

  Extension extendCell(const Vert& f, const HCell& m, const Vert& g) const override {
    return matExtend(fnOf(f), matOf(m), fnOf(g));
  }

  std::optional<Square> factorCart(const Square& cart, const Square& cand, const Vert& uv,
                                   const Vert& vv) const override {
    const MatSq &w = sq(cart), &c = sq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.tgt == w.tgt))
      throw InputError("cartesian factorization: the squares do not share a target");
    if (c.f != u.then(w.f) || c.g != v.then(w.g))
      throw InputError("cartesian factorization: frame maps do not factor the candidate");
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < c.src.rows.size(); ++i)
      for (std::size_t j = 0; j < c.src.cols.size(); ++j) {
        const FinFn& ch = c.maps[i * c.src.cols.size() + j];
        const FinFn& wh = w.maps[u.apply(i) * w.src.cols.size() + v.apply(j)];
        const FinSet& wEntry = w.src.at(u.apply(i), v.apply(j));
        std::vector<std::size_t> pick(c.src.at(i, j).size());
        for (std::size_t e = 0; e < pick.size(); ++e) {
          std::size_t hits = 0, found = 0;
          for (std::size_t t = 0; t < wEntry.size(); ++t)
            if (wh.apply(t) == ch.apply(e)) {
              found = t;
              ++hits;
            }
          if (hits != 1) return std::nullopt;
          pick[e] = found;
        }
        maps.push_back(FinFn{c.src.at(i, j), wEntry, std::move(pick)});
      }
    return sWrap(c.src, w.src, u, v, std::move(maps));
  }

  std::optional<Square> factorOpcart(const Square& opcart, const Square& cand, const Vert& uv,
                                     const Vert& vv) const override {
    const MatSq &w = sq(opcart), &c = sq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.src == w.src))
      throw InputError("opcartesian factorization: the squares do not share a source");
    if (c.f != w.f.then(u) || c.g != w.g.then(v))
      throw InputError("opcartesian factorization: frame maps do not factor the candidate");
    // forced on entry images, pinned elsewhere only when the target entry
    // is a singleton
    std::vector<std::vector<std::size_t>> tabs(w.tgt.entries.size());
    std::vector<std::vector<bool>> set(w.tgt.entries.size());
    for (std::size_t p = 0; p < w.tgt.rows.size(); ++p)
      for (std::size_t q = 0; q < w.tgt.cols.size(); ++q) {
        std::size_t k = p * w.tgt.cols.size() + q;
        tabs[k].assign(w.tgt.at(p, q).size(), 0);
        set[k].assign(w.tgt.at(p, q).size(), false);
      }
    for (std::size_t i = 0; i < w.src.rows.size(); ++i)
      for (std::size_t j = 0; j < w.src.cols.size(); ++j) {
        const FinFn& wh = w.maps[i * w.src.cols.size() + j];
        const FinFn& ch = c.maps[i * w.src.cols.size() + j];
        std::size_t k = w.f.apply(i) * w.tgt.cols.size() + w.g.apply(j);
        for (std::size_t e = 0; e < w.src.at(i, j).size(); ++e) {
          std::size_t t = wh.apply(e), val = ch.apply(e);
          if (!set[k][t]) {
            set[k][t] = true;
            tabs[k][t] = val;
          } else if (tabs[k][t] != val) {
            return std::nullopt;
          }
        }
      }
    std::vector<FinFn> maps;
    for (std::size_t p = 0; p < w.tgt.rows.size(); ++p)
      for (std::size_t q = 0; q < w.tgt.cols.size(); ++q) {
        std::size_t k = p * w.tgt.cols.size() + q;
        const FinSet& dst = c.tgt.at(u.apply(p), v.apply(q));
        for (std::size_t t = 0; t < tabs[k].size(); ++t)
          if (!set[k][t]) {
            if (dst.size() != 1) return std::nullopt;
            tabs[k][t] = 0;
          }
        maps.push_back(FinFn{w.tgt.at(p, q), dst, std::move(tabs[k])});
      }
    return sWrap(w.tgt, c.tgt, u, v, std::move(maps));
  }

  void forEachSquare(const HCell& srcc, const HCell& tgtc, const Vert& fv, const Vert& gv,
                     const std::function<bool(const Square&)>& cb) const override {
    const MatCell &src = matOf(srcc), &tgt = matOf(tgtc);
    const FinFn &f = fnOf(fv), &g = fnOf(gv);
    if (f.dom != src.rows || f.cod != tgt.rows || g.dom != src.cols || g.cod != tgt.cols)
      throw InputError("square enumeration: frame maps do not connect the matrices");
    // one slot per source element, all targeting the matching entry
    struct Slot {
      std::size_t entry, elem, fan;
    };
    std::vector<Slot> slots;
    std::uint64_t budget = fin::searchBudget(), count = 1;
    for (std::size_t i = 0; i < src.rows.size(); ++i)
      for (std::size_t j = 0; j < src.cols.size(); ++j) {
        std::size_t fan = tgt.at(f.apply(i), g.apply(j)).size();
        for (std::size_t e = 0; e < src.at(i, j).size(); ++e) {
          if (fan == 0) return;
          slots.push_back({i * src.cols.size() + j, e, fan});
          if (count > budget / fan)
            throw fin::BudgetError("square enumeration between matrices exceeds the budget");
          count *= fan;
        }
      }
    std::vector<std::size_t> idx(slots.size(), 0);
    while (true) {
      std::vector<FinFn> maps;
      maps.reserve(src.entries.size());
      std::size_t s = 0;
      for (std::size_t i = 0; i < src.rows.size(); ++i)
        for (std::size_t j = 0; j < src.cols.size(); ++j) {
          std::vector<std::size_t> tab(src.at(i, j).size());
          for (std::size_t e = 0; e < tab.size(); ++e) tab[e] = idx[s++];
          maps.push_back(FinFn{src.at(i, j), tgt.at(f.apply(i), g.apply(j)), std::move(tab)});
        }
      if (!cb(sWrap(src, tgt, f, g, std::move(maps)))) return;
      std::size_t k = slots.size();
      while (k > 0 && ++idx[k - 1] == slots[k - 1].fan) idx[--k] = 0;
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
    const FinSet &rows = setOf(a), &cols = setOf(b);
    const std::size_t slots = rows.size() * cols.size();
    const std::uint64_t budget = fin::searchBudget();
    std::uint64_t count = 0;
    std::vector<std::size_t> digits(slots, 0);
    while (true) {
      if (++count > budget)
        throw fin::BudgetError("matrix enumeration exceeds the search budget");
      std::vector<FinSet> entries;
      entries.reserve(slots);
      std::size_t slot = 0;
      for (const auto& i : rows.elems)
        for (const auto& j : cols.elems) {
          std::vector<std::string> elems;
          for (std::size_t e = 0; e < digits[slot]; ++e) elems.push_back("x" + std::to_string(e));
          entries.push_back(fin::makeSet(entryName("E", i, j), std::move(elems)));
          ++slot;
        }
      if (!cb(hWrap(MatCell{rows, cols, std::move(entries)}))) return;
      std::size_t pos = 0;
      while (pos < slots && ++digits[pos] == maxSize + 1) digits[pos++] = 0;
      if (pos == slots) break;
    }
  }

  std::optional<Square> findGlobularIso(const HCell& mc, const HCell& nc) const override {
    const MatCell &m = matOf(mc), &n = matOf(nc);
    if (m.rows != n.rows || m.cols != n.cols) return std::nullopt;
    std::vector<FinFn> maps;
    maps.reserve(m.entries.size());
    for (std::size_t k = 0; k < m.entries.size(); ++k) {
      if (m.entries[k].size() != n.entries[k].size()) return std::nullopt;
      std::vector<std::size_t> tab(m.entries[k].size());
      for (std::size_t e = 0; e < tab.size(); ++e) tab[e] = e;
      maps.push_back(FinFn{m.entries[k], n.entries[k], std::move(tab)});
    }
    return sWrap(m, n, FinFn::identity(m.rows), FinFn::identity(m.cols), std::move(maps));
  }

  LocalCoeq localCoequalizer(const Square& a, const Square& b) const override {
    const MatSq &x = sq(a), &y = sq(b);
    if (!(x.src == y.src) || !(x.tgt == y.tgt))
      throw InputError("local coequalizer: the squares are not parallel");
    FinFn idr = FinFn::identity(x.src.rows), idc = FinFn::identity(x.src.cols);
    if (x.f != idr || x.g != idc || y.f != idr || y.g != idc)
      throw InputError("local coequalizer: the squares must be globular");
    std::vector<FinSet> entries;
    std::vector<FinFn> proj;
    for (std::size_t k = 0; k < x.src.entries.size(); ++k) {
      fin::QuotientMap q = fin::coequalizer(x.maps[k], y.maps[k]);
      entries.push_back(q.quotient());
      proj.push_back(q.projection());
    }
    MatCell cell{x.tgt.rows, x.tgt.cols, std::move(entries)};
    Square pr = sWrap(x.tgt, cell, idr, idc, std::move(proj));
    return LocalCoeq{hWrap(std::move(cell)), std::move(pr)};
  }

  std::optional<Square> factorCoeq(const LocalCoeq& q, const Square& cand, const Vert& uv,
                                   const Vert& vv) const override {
    const MatSq &p = sq(q.proj), &c = sq(cand);
    const FinFn &u = fnOf(uv), &v = fnOf(vv);
    if (!(c.src == p.src))
      throw InputError("coequalizer descent: the candidate does not start at the quotiented "
                       "cell");
    if (c.f != u || c.g != v)
      throw InputError("coequalizer descent: frame maps differ from the candidate's");
    const MatCell& quot = matOf(q.cell);
    std::vector<FinFn> maps;
    for (std::size_t k = 0; k < quot.entries.size(); ++k) {
      const FinSet& dst = c.maps[k].cod;
      std::vector<std::size_t> tab(quot.entries[k].size());
      std::vector<bool> set(tab.size(), false);
      for (std::size_t e = 0; e < p.src.entries[k].size(); ++e) {
        std::size_t cls = p.maps[k].apply(e), val = c.maps[k].apply(e);
        if (!set[cls]) {
          set[cls] = true;
          tab[cls] = val;
        } else if (tab[cls] != val) {
          return std::nullopt;
        }
      }
      maps.push_back(FinFn{quot.entries[k], dst, std::move(tab)});
    }
    return sWrap(quot, c.tgt, u, v, std::move(maps));
  }

  Obj sampleObj(fin::Rng& rng, std::size_t maxSize) const override {
    std::size_t n = rng.below(maxSize + 1);
    std::size_t id = rng.below(10000);
    std::vector<std::string> elems;
    for (std::size_t i = 0; i < n; ++i)
      elems.push_back("r" + std::to_string(i) + "_" + std::to_string(id));
    return oWrap(fin::makeSet("R" + std::to_string(id), std::move(elems)));
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
    const FinSet &rows = setOf(lfo), &cols = setOf(rfo);
    std::vector<FinSet> entries;
    for (const auto& i : rows.elems)
      for (const auto& j : cols.elems) {
        std::size_t n = rng.below(maxSize + 1);
        std::size_t id = rng.below(10000);
        std::vector<std::string> elems;
        for (std::size_t e = 0; e < n; ++e)
          elems.push_back("m" + std::to_string(e) + "_" + std::to_string(id));
        entries.push_back(fin::makeSet(entryName("E", i, j), std::move(elems)));
      }
    return hWrap(MatCell{rows, cols, std::move(entries)});
  }

  std::optional<Square> sampleSquare(fin::Rng& rng, const HCell& srcc, const HCell& tgtc,
                                     const Vert& fv, const Vert& gv) const override {
    const MatCell &src = matOf(srcc), &tgt = matOf(tgtc);
    const FinFn &f = fnOf(fv), &g = fnOf(gv);
    std::vector<FinFn> maps;
    for (std::size_t i = 0; i < src.rows.size(); ++i)
      for (std::size_t j = 0; j < src.cols.size(); ++j) {
        const FinSet& dst = tgt.at(f.apply(i), g.apply(j));
        if (dst.empty() && !src.at(i, j).empty()) return std::nullopt;
        std::vector<std::size_t> tab(src.at(i, j).size());
        for (auto& t : tab) t = rng.below(dst.size());
        maps.push_back(FinFn{src.at(i, j), dst, std::move(tab)});
      }
    return sWrap(src, tgt, f, g, std::move(maps));
  }

  json objJson(const Obj& a) const override { return io::setJson(setOf(a)); }
  json vertJson(const Vert& f) const override { return io::fnJson(fnOf(f)); }

  json hcellJson(const HCell& mc) const override {
    const MatCell& m = matOf(mc);
    json entries = json::array();
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.cols.size(); ++j) row.push_back(m.at(i, j).elems);
      entries.push_back(row);
    }
    return json{{"rows", io::setJson(m.rows)},
                {"cols", io::setJson(m.cols)},
                {"entries", entries}};
  }

  json squareJson(const Square& a) const override {
    const MatSq& x = sq(a);
    json maps = json::array();
    for (const auto& h : x.maps) maps.push_back(io::fnJson(h));
    return json{{"src", hcellJson(HCell{x.src, {}, {}})},
                {"tgt", hcellJson(HCell{x.tgt, {}, {}})},
                {"left", io::fnJson(x.f)},
                {"right", io::fnJson(x.g)},
                {"maps", maps}};
  }

 private:
  static const FinSet& setOf(const Obj& a) { return unwrap<FinSet>(a.v, "finite set"); }
  static const FinFn& fnOf(const Vert& f) { return unwrap<FinFn>(f.v, "function"); }
  static const MatCell& matOf(const HCell& m) { return unwrap<MatCell>(m.v, "set matrix"); }
};

}  // namespace

Restriction matRestrict(const FinFn& f, const MatCell& m, const FinFn& g) {
  if (f.cod != m.rows || g.cod != m.cols)
    throw InputError("matrix restriction: index maps must land in the matrix indices");
  std::vector<FinSet> entries;
  std::vector<FinFn> maps;
  for (std::size_t i = 0; i < f.dom.size(); ++i)
    for (std::size_t j = 0; j < g.dom.size(); ++j) {
      entries.push_back(m.at(f.apply(i), g.apply(j)));
      maps.push_back(FinFn::identity(entries.back()));
    }
  MatCell cell{f.dom, g.dom, std::move(entries)};
  Square cart = sWrap(cell, m, f, g, std::move(maps));
  return Restriction{hWrap(std::move(cell)), std::move(cart)};
}

Extension matExtend(const FinFn& f, const MatCell& m, const FinFn& g) {
  if (f.dom != m.rows || g.dom != m.cols)
    throw InputError("matrix extension: index maps must start at the matrix indices");
  std::vector<FinSet> entries;
  for (std::size_t p = 0; p < f.cod.size(); ++p)
    for (std::size_t q = 0; q < g.cod.size(); ++q) {
      std::vector<std::string> elems;
      for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols.size(); ++j)
          if (f.apply(i) == p && g.apply(j) == q)
            for (const auto& x : m.at(i, j).elems)
              elems.push_back(sumLabel(fin::pairLabel(m.rows.elems[i], m.cols.elems[j]), x));
      entries.push_back(
          fin::makeSet(entryName("X", f.cod.elems[p], g.cod.elems[q]), std::move(elems)));
    }
  MatCell cell{f.cod, g.cod, std::move(entries)};
  std::vector<FinFn> maps;
  for (std::size_t i = 0; i < m.rows.size(); ++i)
    for (std::size_t j = 0; j < m.cols.size(); ++j) {
      const FinSet& dst = cell.at(f.apply(i), g.apply(j));
      std::string tag = fin::pairLabel(m.rows.elems[i], m.cols.elems[j]);
      maps.push_back(FinFn::make(m.at(i, j), dst,
                                 [&](const std::string& x) { return sumLabel(tag, x); }));
    }
  Square opcart = sWrap(m, cell, f, g, std::move(maps));
  return Extension{hWrap(std::move(cell)), std::move(opcart)};
}

const Instance& matInstance() {
  static const MatInstance inst;
  return inst;
}

Obj wrapObj(FinSet a) { return oWrap(std::move(a)); }
Vert wrapVert(FinFn f) { return vWrap(std::move(f)); }
HCell wrapCell(MatCell m) {
  if (m.entries.size() != m.rows.size() * m.cols.size())
    throw InputError("matrix: entry table does not cover rows x cols");
  return hWrap(std::move(m));
}
Square wrapSquare(MatCell src, MatCell tgt, FinFn f, FinFn g, std::vector<FinFn> maps) {
  return sWrap(std::move(src), std::move(tgt), std::move(f), std::move(g), std::move(maps));
}
const MatCell& cellOf(const HCell& m) { return unwrap<MatCell>(m.v, "set matrix"); }
const std::vector<FinFn>& mapsOf(const Square& s) { return sq(s).maps; }
const FinSet& objOf(const Obj& a) { return unwrap<FinSet>(a.v, "finite set"); }
const FinFn& vertOf(const Vert& f) { return unwrap<FinFn>(f.v, "function"); }

}  // namespace framedkit::mat
