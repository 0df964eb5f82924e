#include "framedkit/functors.hpp"

#include <algorithm>

namespace framedkit::functors {

using dbl::HCell;
using dbl::Obj;
using dbl::Square;
using dbl::Vert;
using fin::BudgetError;
using fin::InputError;
using laws::Flavor;

namespace {

using Relabel = std::function<std::string(const std::string&)>;

Square spanSurgery(const span::SpanCell& src, const span::SpanCell& tgt, const FinFn& la,
                   const FinFn& ra, const Relabel& re) {
  return span::wrapSquare(src, tgt, la, ra, FinFn::make(src.apex, tgt.apex, re));
}

Square matSurgery(const mat::MatCell& src, const mat::MatCell& tgt, const FinFn& f,
                  const FinFn& g, const Relabel& re) {
  std::vector<FinFn> maps;
  maps.reserve(src.rows.size() * src.cols.size());
  for (std::size_t i = 0; i < src.rows.size(); ++i)
    for (std::size_t j = 0; j < src.cols.size(); ++j)
      maps.push_back(FinFn::make(src.at(i, j), tgt.at(f.apply(i), g.apply(j)), re));
  return mat::wrapSquare(src, tgt, f, g, std::move(maps));
}

// pair(x,y) ↦ pair(f x, g y) between product apexes
FinFn prodFn(const FinFn& f, const FinFn& g) {
  FinSet dom = fin::product(f.dom, g.dom).apex;
  FinSet cod = fin::product(f.cod, g.cod).apex;
  return FinFn::make(dom, cod, [&](const std::string& x) {
    auto p = fin::splitPair(x);
    return fin::pairLabel(f.at(p->first), g.at(p->second));
  });
}

std::string reassocLabel(const std::string& x) {  // pair(pair(a,b),c) ↦ pair(a,pair(b,c))
  auto o = fin::splitPair(x);
  auto i = fin::splitPair(o->first);
  return fin::pairLabel(i->first, fin::pairLabel(i->second, o->second));
}

std::string swapLabel(const std::string& x) {
  auto p = fin::splitPair(x);
  return fin::pairLabel(p->second, p->first);
}

std::string firstLabel(const std::string& x) { return fin::splitPair(x)->first; }
std::string secondLabel(const std::string& x) { return fin::splitPair(x)->second; }

// pair(pair(m,p),pair(n,q)) ↦ pair(pair(m,n),pair(p,q))
std::string interchangeLabel(const std::string& x) {
  auto o = fin::splitPair(x);
  auto l = fin::splitPair(o->first);
  auto r = fin::splitPair(o->second);
  return fin::pairLabel(fin::pairLabel(l->first, r->first),
                        fin::pairLabel(l->second, r->second));
}

std::string fnLabel(const FinSet& s, const FinFn& phi) {
  std::string inner;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) inner += ';';
    inner += s.elems[i] + ":" + phi.cod.elems[phi.apply(i)];
  }
  return fin::taggedLabel("fn", inner);
}

}  // namespace

FramedFunctor relFunctor() {
  FramedFunctor f;
  f.dom = &span::spanInstance();
  f.cod = &span::relInstance();
  f.name = "underlying-relation";
  f.flavor = Flavor::Strong;
  f.onObj = [](const Obj& a) { return a; };
  f.onVert = [](const Vert& v) { return v; };
  f.onCell = [](const HCell& m) { return span::wrapRel(span::toRelation(span::cellOf(m))); };
  f.onSquare = [](const Square& q) {
    return span::relSquare(span::toRelation(span::cellOf(q.src)),
                           span::toRelation(span::cellOf(q.tgt)), span::vertOf(q.la),
                           span::vertOf(q.ra));
  };
  f.compCmp = [](const HCell& mc, const HCell& nc) {
    const span::SpanCell &m = span::cellOf(mc), &n = span::cellOf(nc);
    span::Relation composed = span::relCompose(span::toRelation(m), span::toRelation(n));
    span::Relation direct = span::toRelation(span::spanCompose(m, n));
    return span::relSquare(std::move(composed), std::move(direct), FinFn::identity(m.lf),
                           FinFn::identity(n.rf));
  };
  f.unitCmp = [](const Obj& a) {
    const FinSet& s = span::objOf(a);
    return span::relSquare(span::relUnit(s), span::toRelation(span::spanUnit(s)),
                           FinFn::identity(s), FinFn::identity(s));
  };
  return f;
}

FramedFunctor spanLift(const SetFunctor& f) {
  FramedFunctor g;
  g.dom = &span::spanInstance();
  g.cod = &span::spanInstance();
  g.name = "span(" + f.name + ")";
  g.flavor = Flavor::Normal;
  auto lift = [f](const span::SpanCell& m) {
    return span::SpanCell{f.onSet(m.lf), f.onSet(m.rf), f.onSet(m.apex), f.onFn(m.l),
                          f.onFn(m.r)};
  };
  g.onObj = [f](const Obj& a) { return span::wrapObj(f.onSet(span::objOf(a))); };
  g.onVert = [f](const Vert& v) { return span::wrapVert(f.onFn(span::vertOf(v))); };
  g.onCell = [lift](const HCell& m) { return span::wrapCell(lift(span::cellOf(m))); };
  g.onSquare = [f, lift](const Square& q) {
    return span::wrapSquare(lift(span::cellOf(q.src)), lift(span::cellOf(q.tgt)),
                            f.onFn(span::vertOf(q.la)), f.onFn(span::vertOf(q.ra)),
                            f.onFn(span::mapOf(q)));
  };
  g.compCmp = [f, lift](const HCell& mc, const HCell& nc) {
    const span::SpanCell &m = span::cellOf(mc), &n = span::cellOf(nc);
    fin::SpanDiagram pb = fin::pullback(m.r, n.l);
    span::SpanCell src = lift(span::spanCompose(m, n));
    span::SpanCell tgt = span::spanCompose(lift(m), lift(n));
    FinFn fp1 = f.onFn(pb.p1), fp2 = f.onFn(pb.p2);
    FinFn h = FinFn::make(src.apex, tgt.apex, [&](const std::string& z) {
      return fin::pairLabel(fp1.at(z), fp2.at(z));
    });
    FinFn il = FinFn::identity(src.lf), ir = FinFn::identity(src.rf);
    return span::wrapSquare(std::move(src), std::move(tgt), std::move(il), std::move(ir),
                            std::move(h));
  };
  g.unitCmp = [f](const Obj& a) {
    const FinSet& s = span::objOf(a);
    span::SpanCell src{f.onSet(s), f.onSet(s), f.onSet(s), f.onFn(FinFn::identity(s)),
                       f.onFn(FinFn::identity(s))};
    span::SpanCell tgt = span::spanUnit(f.onSet(s));
    FinFn id = FinFn::identity(src.apex);
    return span::wrapSquare(std::move(src), std::move(tgt), id, id, id);
  };
  return g;
}

SetFunctor powersetFunctor() {
  SetFunctor f;
  f.name = "powerset";
  f.onSet = [](const FinSet& a) {
    if (a.size() >= 20) throw BudgetError("powerset: base set too large");
    std::size_t n = a.size();
    std::vector<std::string> elems;
    elems.reserve(std::size_t(1) << n);
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
      std::string inner;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (std::size_t(1) << i)) {
          if (!inner.empty()) inner += ';';
          inner += a.elems[i];
        }
      elems.push_back(fin::taggedLabel("sub", inner));
    }
    return fin::makeSet("P(" + a.name + ")", std::move(elems));
  };
  f.onFn = [onSet = f.onSet](const FinFn& g) {
    FinSet pd = onSet(g.dom), pc = onSet(g.cod);
    std::vector<std::size_t> tab(pd.size());
    for (std::size_t mask = 0; mask < tab.size(); ++mask) {
      std::size_t img = 0;
      for (std::size_t i = 0; i < g.dom.size(); ++i)
        if (mask & (std::size_t(1) << i)) img |= std::size_t(1) << g.apply(i);
      tab[mask] = img;  // bitmask order doubles as the subset index
    }
    return FinFn{std::move(pd), std::move(pc), std::move(tab)};
  };
  return f;
}

FinSet expSet(const FinSet& s, const FinSet& a) {
  std::vector<std::string> elems;
  for (const FinFn& phi : fin::allFunctions(s, a)) elems.push_back(fnLabel(s, phi));
  return fin::makeSet(a.name + "^" + s.name, std::move(elems));
}

FramedFunctor productFunctor(const FinSet& s) {
  SetFunctor f;
  f.name = "-x" + s.name;
  f.onSet = [s](const FinSet& a) { return fin::product(a, s).apex; };
  f.onFn = [s](const FinFn& g) { return prodFn(g, FinFn::identity(s)); };
  FramedFunctor out = laws::strengthen(spanLift(f));
  out.name = "product-with-" + s.name;
  return out;
}

FramedFunctor exponentialFunctor(const FinSet& s) {
  SetFunctor f;
  f.name = "-^" + s.name;
  f.onSet = [s](const FinSet& a) { return expSet(s, a); };
  f.onFn = [s](const FinFn& g) {
    FinSet ed = expSet(s, g.dom), ec = expSet(s, g.cod);
    std::vector<FinFn> df = fin::allFunctions(s, g.dom);
    std::vector<FinFn> cf = fin::allFunctions(s, g.cod);
    std::vector<std::size_t> tab(df.size());
    for (std::size_t i = 0; i < df.size(); ++i) {
      FinFn comp = df[i].then(g);
      auto it = std::find(cf.begin(), cf.end(), comp);
      if (it == cf.end()) throw InputError("exponential: composite missing from enumeration");
      tab[i] = static_cast<std::size_t>(it - cf.begin());
    }
    return FinFn{std::move(ed), std::move(ec), std::move(tab)};
  };
  FramedFunctor out = laws::strengthen(spanLift(f));
  out.name = "exponential-by-" + s.name;
  return out;
}

FramedTransformation productExpUnit(const FinSet& s) {
  FramedFunctor gf = laws::composeFunctors(productFunctor(s), exponentialFunctor(s));
  auto comp = [s](const FinSet& a) {  // A → (A×S)^S,  a ↦ (s ↦ (a,s))
    FinSet prod = fin::product(a, s).apex;
    FinSet exp = expSet(s, prod);
    return FinFn::make(a, exp, [&](const std::string& x) {
      FinFn phi =
          FinFn::make(s, prod, [&](const std::string& sv) { return fin::pairLabel(x, sv); });
      return fnLabel(s, phi);
    });
  };
  FramedTransformation t;
  t.name = "pairing-unit";
  t.onObj = [comp](const Obj& a) { return span::wrapVert(comp(span::objOf(a))); };
  t.onCell = [comp, gf](const HCell& m) {
    const span::SpanCell& mm = span::cellOf(m);
    return span::wrapSquare(mm, span::cellOf(gf.onCell(m)), comp(mm.lf), comp(mm.rf),
                            comp(mm.apex));
  };
  return t;
}

FramedTransformation productExpCounit(const FinSet& s) {
  FramedFunctor fg = laws::composeFunctors(exponentialFunctor(s), productFunctor(s));
  auto comp = [s](const FinSet& c) {  // (C^S)×S → C,  (φ,s) ↦ φ(s)
    std::vector<FinFn> fns = fin::allFunctions(s, c);
    FinSet dom = fin::product(expSet(s, c), s).apex;
    std::vector<std::size_t> tab(dom.size());
    for (std::size_t i = 0; i < fns.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j) tab[i * s.size() + j] = fns[i].apply(j);
    return FinFn{std::move(dom), c, std::move(tab)};
  };
  FramedTransformation t;
  t.name = "evaluation-counit";
  t.onObj = [comp](const Obj& c) { return span::wrapVert(comp(span::objOf(c))); };
  t.onCell = [comp, fg](const HCell& n) {
    const span::SpanCell& nn = span::cellOf(n);
    return span::wrapSquare(span::cellOf(fg.onCell(n)), nn, comp(nn.lf), comp(nn.rf),
                            comp(nn.apex));
  };
  return t;
}

MonoidalData spanMonoidalData() {
  MonoidalData d;
  FinSet unit = fin::makeSet("I", {"pt"});
  d.unitObj = span::wrapObj(unit);
  d.prodObj = [](const Obj& a, const Obj& b) {
    return span::wrapObj(fin::product(span::objOf(a), span::objOf(b)).apex);
  };
  d.prodVert = [](const Vert& f, const Vert& g) {
    return span::wrapVert(prodFn(span::vertOf(f), span::vertOf(g)));
  };
  d.prodCell = [](const HCell& m, const HCell& n) {
    return span::wrapCell(span::externalProduct(span::cellOf(m), span::cellOf(n)));
  };
  d.prodSquare = [](const Square& x, const Square& y) {
    return span::wrapSquare(span::externalProduct(span::cellOf(x.src), span::cellOf(y.src)),
                            span::externalProduct(span::cellOf(x.tgt), span::cellOf(y.tgt)),
                            prodFn(span::vertOf(x.la), span::vertOf(y.la)),
                            prodFn(span::vertOf(x.ra), span::vertOf(y.ra)),
                            prodFn(span::mapOf(x), span::mapOf(y)));
  };
  d.interchange = [](const HCell& mc, const HCell& pc, const HCell& nc, const HCell& qc) {
    const span::SpanCell &m = span::cellOf(mc), &p = span::cellOf(pc);
    const span::SpanCell &n = span::cellOf(nc), &q = span::cellOf(qc);
    span::SpanCell src =
        span::spanCompose(span::externalProduct(m, p), span::externalProduct(n, q));
    span::SpanCell tgt =
        span::externalProduct(span::spanCompose(m, n), span::spanCompose(p, q));
    FinFn il = FinFn::identity(src.lf), ir = FinFn::identity(src.rf);
    return spanSurgery(src, tgt, il, ir, interchangeLabel);
  };
  d.unitIso = [](const Obj& a, const Obj& b) {
    FinSet ab = fin::product(span::objOf(a), span::objOf(b)).apex;
    span::SpanCell src = span::spanUnit(ab);
    span::SpanCell tgt =
        span::externalProduct(span::spanUnit(span::objOf(a)), span::spanUnit(span::objOf(b)));
    FinFn id = FinFn::identity(ab);
    return spanSurgery(src, tgt, id, id, [](const std::string& x) { return x; });
  };
  d.assocObj = [](const Obj& a, const Obj& b, const Obj& c) {
    const FinSet &sa = span::objOf(a), &sb = span::objOf(b), &sc = span::objOf(c);
    FinSet l = fin::product(fin::product(sa, sb).apex, sc).apex;
    FinSet r = fin::product(sa, fin::product(sb, sc).apex).apex;
    return span::wrapVert(FinFn::make(l, r, reassocLabel));
  };
  d.lunitObj = [unit](const Obj& a) {
    const FinSet& sa = span::objOf(a);
    return span::wrapVert(FinFn::make(fin::product(unit, sa).apex, sa, secondLabel));
  };
  d.runitObj = [unit](const Obj& a) {
    const FinSet& sa = span::objOf(a);
    return span::wrapVert(FinFn::make(fin::product(sa, unit).apex, sa, firstLabel));
  };
  d.assocCell = [d](const HCell& mc, const HCell& nc, const HCell& pc) {
    const span::SpanCell &m = span::cellOf(mc), &n = span::cellOf(nc), &p = span::cellOf(pc);
    span::SpanCell src = span::externalProduct(span::externalProduct(m, n), p);
    span::SpanCell tgt = span::externalProduct(m, span::externalProduct(n, p));
    return spanSurgery(src, tgt,
                       span::vertOf(d.assocObj(span::wrapObj(m.lf), span::wrapObj(n.lf),
                                               span::wrapObj(p.lf))),
                       span::vertOf(d.assocObj(span::wrapObj(m.rf), span::wrapObj(n.rf),
                                               span::wrapObj(p.rf))),
                       reassocLabel);
  };
  d.lunitCell = [d, unit](const HCell& mc) {
    const span::SpanCell& m = span::cellOf(mc);
    span::SpanCell src = span::externalProduct(span::spanUnit(unit), m);
    return spanSurgery(src, m, span::vertOf(d.lunitObj(span::wrapObj(m.lf))),
                       span::vertOf(d.lunitObj(span::wrapObj(m.rf))), secondLabel);
  };
  d.runitCell = [d, unit](const HCell& mc) {
    const span::SpanCell& m = span::cellOf(mc);
    span::SpanCell src = span::externalProduct(m, span::spanUnit(unit));
    return spanSurgery(src, m, span::vertOf(d.runitObj(span::wrapObj(m.lf))),
                       span::vertOf(d.runitObj(span::wrapObj(m.rf))), firstLabel);
  };
  d.symObj = [](const Obj& a, const Obj& b) {
    const FinSet &sa = span::objOf(a), &sb = span::objOf(b);
    return span::wrapVert(
        FinFn::make(fin::product(sa, sb).apex, fin::product(sb, sa).apex, swapLabel));
  };
  d.symCell = [d](const HCell& mc, const HCell& pc) {
    const span::SpanCell &m = span::cellOf(mc), &p = span::cellOf(pc);
    return spanSurgery(span::externalProduct(m, p), span::externalProduct(p, m),
                       span::vertOf(d.symObj(span::wrapObj(m.lf), span::wrapObj(p.lf))),
                       span::vertOf(d.symObj(span::wrapObj(m.rf), span::wrapObj(p.rf))),
                       swapLabel);
  };
  return d;
}

MonoidalData matMonoidalData() {
  MonoidalData d;
  FinSet unit = fin::makeSet("I", {"pt"});
  d.unitObj = mat::wrapObj(unit);
  d.prodObj = [](const Obj& a, const Obj& b) {
    return mat::wrapObj(fin::product(mat::objOf(a), mat::objOf(b)).apex);
  };
  d.prodVert = [](const Vert& f, const Vert& g) {
    return mat::wrapVert(prodFn(mat::vertOf(f), mat::vertOf(g)));
  };
  d.prodCell = [](const HCell& m, const HCell& n) {
    return mat::wrapCell(mat::matExternalTensor(mat::cellOf(m), mat::cellOf(n)));
  };
  d.prodSquare = [](const Square& x, const Square& y) {
    const mat::MatCell &xs = mat::cellOf(x.src), &ys = mat::cellOf(y.src);
    mat::MatCell src = mat::matExternalTensor(xs, ys);
    mat::MatCell tgt = mat::matExternalTensor(mat::cellOf(x.tgt), mat::cellOf(y.tgt));
    const std::vector<FinFn> &xm = mat::mapsOf(x), &ym = mat::mapsOf(y);
    std::vector<FinFn> maps;
    maps.reserve(src.rows.size() * src.cols.size());
    for (std::size_t i = 0; i < xs.rows.size(); ++i)
      for (std::size_t k = 0; k < ys.rows.size(); ++k)
        for (std::size_t j = 0; j < xs.cols.size(); ++j)
          for (std::size_t l = 0; l < ys.cols.size(); ++l)
            maps.push_back(
                prodFn(xm[i * xs.cols.size() + j], ym[k * ys.cols.size() + l]));
    return mat::wrapSquare(std::move(src), std::move(tgt),
                           prodFn(mat::vertOf(x.la), mat::vertOf(y.la)),
                           prodFn(mat::vertOf(x.ra), mat::vertOf(y.ra)), std::move(maps));
  };
  d.interchange = [](const HCell& mc, const HCell& pc, const HCell& nc, const HCell& qc) {
    const mat::MatCell &m = mat::cellOf(mc), &p = mat::cellOf(pc);
    const mat::MatCell &n = mat::cellOf(nc), &q = mat::cellOf(qc);
    mat::MatCell src =
        mat::matCompose(mat::matExternalTensor(m, p), mat::matExternalTensor(n, q));
    mat::MatCell tgt = mat::matExternalTensor(mat::matCompose(m, n), mat::matCompose(p, q));
    FinSet mid = fin::product(m.cols, p.cols).apex;
    Relabel re = [mid](const std::string& x) {
      auto s = mat::splitSum(x, mid);
      auto xy = fin::splitPair(mid.elems[s->first]);
      auto inner = fin::splitPair(s->second);
      auto mp = fin::splitPair(inner->first);
      auto nq = fin::splitPair(inner->second);
      return fin::pairLabel(mat::sumLabel(xy->first, fin::pairLabel(mp->first, nq->first)),
                            mat::sumLabel(xy->second, fin::pairLabel(mp->second, nq->second)));
    };
    FinFn il = FinFn::identity(src.rows), ir = FinFn::identity(src.cols);
    return matSurgery(src, tgt, il, ir, re);
  };
  d.unitIso = [](const Obj& a, const Obj& b) {
    FinSet ab = fin::product(mat::objOf(a), mat::objOf(b)).apex;
    mat::MatCell src = mat::matUnit(ab);
    mat::MatCell tgt = mat::matExternalTensor(mat::matUnit(mat::objOf(a)),
                                              mat::matUnit(mat::objOf(b)));
    FinFn id = FinFn::identity(ab);
    return matSurgery(src, tgt, id, id,
                      [](const std::string& x) { return fin::pairLabel(x, x); });
  };
  d.assocObj = [](const Obj& a, const Obj& b, const Obj& c) {
    const FinSet &sa = mat::objOf(a), &sb = mat::objOf(b), &sc = mat::objOf(c);
    FinSet l = fin::product(fin::product(sa, sb).apex, sc).apex;
    FinSet r = fin::product(sa, fin::product(sb, sc).apex).apex;
    return mat::wrapVert(FinFn::make(l, r, reassocLabel));
  };
  d.lunitObj = [unit](const Obj& a) {
    const FinSet& sa = mat::objOf(a);
    return mat::wrapVert(FinFn::make(fin::product(unit, sa).apex, sa, secondLabel));
  };
  d.runitObj = [unit](const Obj& a) {
    const FinSet& sa = mat::objOf(a);
    return mat::wrapVert(FinFn::make(fin::product(sa, unit).apex, sa, firstLabel));
  };
  d.assocCell = [d](const HCell& mc, const HCell& nc, const HCell& pc) {
    const mat::MatCell &m = mat::cellOf(mc), &n = mat::cellOf(nc), &p = mat::cellOf(pc);
    mat::MatCell src = mat::matExternalTensor(mat::matExternalTensor(m, n), p);
    mat::MatCell tgt = mat::matExternalTensor(m, mat::matExternalTensor(n, p));
    return matSurgery(src, tgt,
                      mat::vertOf(d.assocObj(mat::wrapObj(m.rows), mat::wrapObj(n.rows),
                                             mat::wrapObj(p.rows))),
                      mat::vertOf(d.assocObj(mat::wrapObj(m.cols), mat::wrapObj(n.cols),
                                             mat::wrapObj(p.cols))),
                      reassocLabel);
  };
  d.lunitCell = [d, unit](const HCell& mc) {
    const mat::MatCell& m = mat::cellOf(mc);
    mat::MatCell src = mat::matExternalTensor(mat::matUnit(unit), m);
    return matSurgery(src, m, mat::vertOf(d.lunitObj(mat::wrapObj(m.rows))),
                      mat::vertOf(d.lunitObj(mat::wrapObj(m.cols))), secondLabel);
  };
  d.runitCell = [d, unit](const HCell& mc) {
    const mat::MatCell& m = mat::cellOf(mc);
    mat::MatCell src = mat::matExternalTensor(m, mat::matUnit(unit));
    return matSurgery(src, m, mat::vertOf(d.runitObj(mat::wrapObj(m.rows))),
                      mat::vertOf(d.runitObj(mat::wrapObj(m.cols))), firstLabel);
  };
  d.symObj = [](const Obj& a, const Obj& b) {
    const FinSet &sa = mat::objOf(a), &sb = mat::objOf(b);
    return mat::wrapVert(
        FinFn::make(fin::product(sa, sb).apex, fin::product(sb, sa).apex, swapLabel));
  };
  d.symCell = [d](const HCell& mc, const HCell& pc) {
    const mat::MatCell &m = mat::cellOf(mc), &p = mat::cellOf(pc);
    return matSurgery(mat::matExternalTensor(m, p), mat::matExternalTensor(p, m),
                      mat::vertOf(d.symObj(mat::wrapObj(m.rows), mat::wrapObj(p.rows))),
                      mat::vertOf(d.symObj(mat::wrapObj(m.cols), mat::wrapObj(p.cols))),
                      swapLabel);
  };
  return d;
}

InvolutionData spanInvolutionData() {
  InvolutionData d;
  d.opObj = [](const Obj& a) { return a; };
  d.opVert = [](const Vert& f) { return f; };
  d.opCell = [](const HCell& m) {
    return span::wrapCell(span::spanInvolute(span::cellOf(m)));
  };
  d.opSquare = [](const Square& q) {
    return span::wrapSquare(span::spanInvolute(span::cellOf(q.src)),
                            span::spanInvolute(span::cellOf(q.tgt)), span::vertOf(q.ra),
                            span::vertOf(q.la), span::mapOf(q));
  };
  d.compCmp = [](const HCell& mc, const HCell& nc) {
    const span::SpanCell &m = span::cellOf(mc), &n = span::cellOf(nc);
    span::SpanCell src = span::spanCompose(span::spanInvolute(n), span::spanInvolute(m));
    span::SpanCell tgt = span::spanInvolute(span::spanCompose(m, n));
    FinFn il = FinFn::identity(src.lf), ir = FinFn::identity(src.rf);
    return spanSurgery(src, tgt, il, ir, swapLabel);
  };
  d.unitCmp = [](const Obj& a) {
    return span::spanInstance().sqId(span::spanInstance().hUnit(a));
  };
  d.xiObj = [](const Obj& a) { return span::spanInstance().vId(a); };
  d.xiCell = [](const HCell& m) { return span::spanInstance().sqId(m); };
  return d;
}

InvolutionData matInvolutionData() {
  InvolutionData d;
  d.opObj = [](const Obj& a) { return a; };
  d.opVert = [](const Vert& f) { return f; };
  d.opCell = [](const HCell& m) { return mat::wrapCell(mat::matTranspose(mat::cellOf(m))); };
  d.opSquare = [](const Square& q) {
    const mat::MatCell &src = mat::cellOf(q.src), &tgt = mat::cellOf(q.tgt);
    const std::vector<FinFn>& ms = mat::mapsOf(q);
    mat::MatCell ts = mat::matTranspose(src), tt = mat::matTranspose(tgt);
    std::vector<FinFn> maps(ms.size(), FinFn{});
    for (std::size_t i = 0; i < src.rows.size(); ++i)
      for (std::size_t j = 0; j < src.cols.size(); ++j)
        maps[j * ts.cols.size() + i] = ms[i * src.cols.size() + j];
    return mat::wrapSquare(std::move(ts), std::move(tt), mat::vertOf(q.ra),
                           mat::vertOf(q.la), std::move(maps));
  };
  d.compCmp = [](const HCell& mc, const HCell& nc) {
    const mat::MatCell &m = mat::cellOf(mc), &n = mat::cellOf(nc);
    mat::MatCell src = mat::matCompose(mat::matTranspose(n), mat::matTranspose(m));
    mat::MatCell tgt = mat::matTranspose(mat::matCompose(m, n));
    Relabel re = [mid = m.cols](const std::string& x) {
      auto s = mat::splitSum(x, mid);
      auto nm = fin::splitPair(s->second);
      return mat::sumLabel(mid.elems[s->first], fin::pairLabel(nm->second, nm->first));
    };
    FinFn il = FinFn::identity(src.rows), ir = FinFn::identity(src.cols);
    return matSurgery(src, tgt, il, ir, re);
  };
  d.unitCmp = [](const Obj& a) {
    return mat::matInstance().sqId(mat::matInstance().hUnit(a));
  };
  d.xiObj = [](const Obj& a) { return mat::matInstance().vId(a); };
  d.xiCell = [](const HCell& m) { return mat::matInstance().sqId(m); };
  return d;
}

}  // namespace framedkit::functors
