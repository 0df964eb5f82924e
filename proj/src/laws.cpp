#include "framedkit/laws.hpp"

#include <algorithm>
#include <utility>

namespace framedkit::laws {

using fin::BudgetError;
using fin::InputError;
using fin::Rng;

fin::Rng sampleRng(std::uint64_t seed, std::size_t index) {
  return fin::Rng(seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(index) + 1)));
}

std::string LawReport::summary() const {
  std::string out = (pass ? "pass " : "FAIL ") + lawName + " (samples=" +
                    std::to_string(sampleCount) + ", seed=" + std::to_string(seed) + ")";
  if (budgetExceeded) out += " [budget exceeded]";
  return out;
}

json LawReport::toJson() const {
  return json{{"verdict", pass ? "pass" : "fail"}, {"lawName", lawName},
              {"sampleCount", sampleCount},       {"witness", witness},
              {"seed", seed},                     {"budgetExceeded", budgetExceeded},
              {"notes", notes}};
}

bool laxOriented(Flavor f) { return f == Flavor::Lax || f == Flavor::Strong; }

std::string flavorName(Flavor f) {
  switch (f) {
    case Flavor::Lax: return "lax";
    case Flavor::Oplax: return "oplax";
    case Flavor::Strong: return "strong";
    case Flavor::Normal: return "normal";
  }
  return "?";
}

Vert vertInverse(const Instance& I, const Vert& f) {
  std::optional<Vert> found;
  I.forEachVert(f.cod, f.dom, [&](const Vert& g) {
    if (I.vertEq(I.vCompose(f, g), I.vId(f.dom)) && I.vertEq(I.vCompose(g, f), I.vId(f.cod))) {
      found = g;
      return false;
    }
    return true;
  });
  if (!found) throw InputError("vertical arrow has no two-sided inverse");
  return *found;
}

namespace {

struct Violation {
  std::string law;
  json witness;
};

using Maybe = std::optional<Violation>;

json sqWit(const Instance& I, const Square& l, const Square& r) {
  return json{{"lhs", I.squareJson(l)}, {"rhs", I.squareJson(r)}};
}

Maybe eqLaw(const Instance& I, const Square& l, const Square& r, const char* law) {
  if (I.squareEq(l, r)) return std::nullopt;
  return Violation{law, sqWit(I, l, r)};
}

Maybe eqVertLaw(const Instance& I, const Vert& l, const Vert& r, const char* law) {
  if (I.vertEq(l, r)) return std::nullopt;
  return Violation{law, json{{"lhs", I.vertJson(l)}, {"rhs", I.vertJson(r)}}};
}

// the canonical "run every sample, stop at the first violation" driver
LawReport runSamples(const std::string& checker, const Sampler& s,
                     const std::function<Maybe(Rng&)>& one) {
  LawReport rep;
  rep.seed = s.seed;
  rep.lawName = checker;
  rep.sampleCount = 0;
  for (std::size_t i = 0; i < s.samples; ++i) {
    Rng rng = sampleRng(s.seed, i);
    Maybe v;
    try {
      v = one(rng);
    } catch (const BudgetError& e) {
      if (!rep.budgetExceeded) rep.notes.push_back(std::string("budget exceeded: ") + e.what());
      rep.budgetExceeded = true;
      rep.sampleCount = i + 1;
      continue;
    } catch (const InputError& e) {
      v = Violation{"exception", json{{"message", e.what()}}};
    }
    rep.sampleCount = i + 1;
    if (v) {
      rep.pass = false;
      rep.lawName = v->law;
      rep.witness = std::move(v->witness);
      rep.witness["sample"] = i;
      rep.witness["checker"] = checker;
      return rep;
    }
  }
  return rep;
}

// ---- sampling kits ---------------------------------------------------------

struct CellChain {
  std::vector<Obj> objs;   // n+1 objects
  std::vector<HCell> cells;  // cells[i] : objs[i] ⇸ objs[i+1]
};

CellChain sampleChain(const Instance& I, Rng& rng, std::size_t n, const Sampler& s) {
  CellChain c;
  c.objs.push_back(I.sampleObj(rng, s.maxObj));
  for (std::size_t i = 0; i < n; ++i) {
    c.objs.push_back(I.sampleObj(rng, s.maxObj));
    c.cells.push_back(I.sampleHCell(rng, c.objs[i], c.objs[i + 1], s.maxCell));
  }
  return c;
}

// nRows parallel chains of nCols cells connected by verticals and squares:
//   squares[r][c] : rows[r].cells[c] ⇒ rows[r+1].cells[c] over
//                   (verts[r][c], verts[r][c+1])
struct Grid {
  std::vector<CellChain> rows;
  std::vector<std::vector<Vert>> verts;
  std::vector<std::vector<Square>> squares;
};

std::optional<Grid> sampleGrid(const Instance& I, Rng& rng, std::size_t nRows, std::size_t nCols,
                               const Sampler& s) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    Grid g;
    bool ok = true;
    for (std::size_t r = 0; r < nRows && ok; ++r) g.rows.push_back(sampleChain(I, rng, nCols, s));
    for (std::size_t r = 0; r + 1 < nRows && ok; ++r) {
      std::vector<Vert> vr;
      for (std::size_t i = 0; i <= nCols && ok; ++i) {
        auto f = I.sampleVert(rng, g.rows[r].objs[i], g.rows[r + 1].objs[i]);
        if (!f) ok = false;
        else vr.push_back(*f);
      }
      if (ok) g.verts.push_back(std::move(vr));
    }
    for (std::size_t r = 0; r + 1 < nRows && ok; ++r) {
      std::vector<Square> sr;
      for (std::size_t c = 0; c < nCols && ok; ++c) {
        auto q = I.sampleSquare(rng, g.rows[r].cells[c], g.rows[r + 1].cells[c], g.verts[r][c],
                                g.verts[r][c + 1]);
        if (!q) ok = false;
        else sr.push_back(*q);
      }
      if (ok) g.squares.push_back(std::move(sr));
    }
    if (ok) return g;
  }
  return std::nullopt;
}

Maybe invertibleLaw(const Instance& I, const Square& q, const char* law) {
  auto inv = I.invert(q);
  if (!inv) return Violation{law, json{{"square", I.squareJson(q)}}};
  auto rt = eqLaw(I, I.vCompose2(q, *inv), I.sqId(q.src), law);
  if (rt) return rt;
  return eqLaw(I, I.vCompose2(*inv, q), I.sqId(q.tgt), law);
}

// ---- double-category axioms -------------------------------------------------

Maybe coherenceLaws(const Instance& I, Rng& rng, const Sampler& s) {
  CellChain ch = sampleChain(I, rng, 4, s);
  const HCell &m = ch.cells[0], &n = ch.cells[1], &p = ch.cells[2], &q = ch.cells[3];
  HCell mn = I.hCompose(m, n), np = I.hCompose(n, p), pq = I.hCompose(p, q);

  // pentagon: the two routes ((M⊙N)⊙P)⊙Q ⇒ M⊙(N⊙(P⊙Q)) agree
  Square p1 = I.vCompose2(I.assoc(mn, p, q), I.assoc(m, n, pq));
  Square p2 = I.vCompose2(I.vCompose2(I.hCompose2(I.assoc(m, n, p), I.sqId(q)),
                                      I.assoc(m, np, q)),
                          I.hCompose2(I.sqId(m), I.assoc(n, p, q)));
  if (auto v = eqLaw(I, p1, p2, "pentagon")) return v;

  // triangle: assoc then 1⊙lunit equals runit⊙1 on M⊙U⊙N
  Square t1 = I.vCompose2(I.assoc(m, I.hUnit(ch.objs[1]), n),
                          I.hCompose2(I.sqId(m), I.lunit(n)));
  Square t2 = I.hCompose2(I.runit(m), I.sqId(n));
  if (auto v = eqLaw(I, t1, t2, "unit-triangle")) return v;

  if (auto v = eqLaw(I, I.lunit(I.hUnit(ch.objs[0])), I.runit(I.hUnit(ch.objs[0])),
                     "unitor-agreement"))
    return v;

  if (auto v = invertibleLaw(I, I.assoc(m, n, p), "associator-invertible")) return v;
  if (auto v = invertibleLaw(I, I.lunit(m), "left-unitor-invertible")) return v;
  if (auto v = invertibleLaw(I, I.runit(m), "right-unitor-invertible")) return v;

  if (!dbl::globular(I, I.assoc(m, n, p)) || !dbl::framesOk(I, I.assoc(m, n, p)))
    return Violation{"coherence-frames", json{{"square", I.squareJson(I.assoc(m, n, p))}}};
  return std::nullopt;
}

Maybe naturalityLaws(const Instance& I, Rng& rng, const Sampler& s) {
  auto g = sampleGrid(I, rng, 2, 3, s);
  if (!g) return std::nullopt;  // nothing to test this sample
  const Square &am = g->squares[0][0], &an = g->squares[0][1], &ap = g->squares[0][2];
  const CellChain &top = g->rows[0], &bot = g->rows[1];

  Square l = I.vCompose2(I.hCompose2(I.hCompose2(am, an), ap),
                         I.assoc(bot.cells[0], bot.cells[1], bot.cells[2]));
  Square r = I.vCompose2(I.assoc(top.cells[0], top.cells[1], top.cells[2]),
                         I.hCompose2(am, I.hCompose2(an, ap)));
  if (auto v = eqLaw(I, l, r, "associator-natural")) return v;

  Square ll = I.vCompose2(I.hCompose2(I.sqUnit(g->verts[0][0]), am), I.lunit(bot.cells[0]));
  Square lr = I.vCompose2(I.lunit(top.cells[0]), am);
  if (auto v = eqLaw(I, ll, lr, "left-unitor-natural")) return v;

  Square rl = I.vCompose2(I.hCompose2(am, I.sqUnit(g->verts[0][1])), I.runit(bot.cells[0]));
  Square rr = I.vCompose2(I.runit(top.cells[0]), am);
  if (auto v = eqLaw(I, rl, rr, "right-unitor-natural")) return v;

  if (!dbl::framesOk(I, am))
    return Violation{"square-frames", json{{"square", I.squareJson(am)}}};
  return std::nullopt;
}

Maybe verticalCategoryLaws(const Instance& I, Rng& rng, const Sampler& s) {
  Obj b0 = I.sampleObj(rng, s.maxObj), b1 = I.sampleObj(rng, s.maxObj),
      b2 = I.sampleObj(rng, s.maxObj), b3 = I.sampleObj(rng, s.maxObj);
  auto f = I.sampleVert(rng, b0, b1);
  auto g = I.sampleVert(rng, b1, b2);
  auto h = I.sampleVert(rng, b2, b3);
  if (!f || !g || !h) return std::nullopt;

  if (auto v = eqVertLaw(I, I.vCompose(I.vCompose(*f, *g), *h),
                         I.vCompose(*f, I.vCompose(*g, *h)), "vertical-associativity"))
    return v;
  if (auto v = eqVertLaw(I, I.vCompose(I.vId(b0), *f), *f, "vertical-left-identity")) return v;
  if (auto v = eqVertLaw(I, I.vCompose(*f, I.vId(b1)), *f, "vertical-right-identity")) return v;

  if (auto v = eqLaw(I, I.sqUnit(I.vCompose(*f, *g)), I.vCompose2(I.sqUnit(*f), I.sqUnit(*g)),
                     "unit-square-composition"))
    return v;
  if (auto v = eqLaw(I, I.sqUnit(I.vId(b0)), I.sqId(I.hUnit(b0)), "unit-square-identity"))
    return v;
  return std::nullopt;
}

Maybe interchangeLaws(const Instance& I, Rng& rng, const Sampler& s) {
  auto g = sampleGrid(I, rng, 3, 2, s);
  if (!g) return std::nullopt;
  const Square &al = g->squares[0][0], &ga = g->squares[0][1];
  const Square &be = g->squares[1][0], &de = g->squares[1][1];

  Square l = I.hCompose2(I.vCompose2(al, be), I.vCompose2(ga, de));
  Square r = I.vCompose2(I.hCompose2(al, ga), I.hCompose2(be, de));
  if (auto v = eqLaw(I, l, r, "interchange")) return v;

  const CellChain& top = g->rows[0];
  if (auto v = eqLaw(I, I.hCompose2(I.sqId(top.cells[0]), I.sqId(top.cells[1])),
                     I.sqId(I.hCompose(top.cells[0], top.cells[1])), "identity-square-horizontal"))
    return v;
  if (auto v = eqLaw(I, I.vCompose2(I.sqId(al.src), al), al, "identity-square-top")) return v;
  if (auto v = eqLaw(I, I.vCompose2(al, I.sqId(al.tgt)), al, "identity-square-bottom")) return v;
  return std::nullopt;
}

}  // namespace

LawReport checkDoubleAxioms(const Instance& I, const Sampler& s) {
  return runSamples("double-axioms " + I.name(), s, [&](Rng& rng) -> Maybe {
    if (auto v = coherenceLaws(I, rng, s)) return v;
    if (auto v = naturalityLaws(I, rng, s)) return v;
    if (auto v = verticalCategoryLaws(I, rng, s)) return v;
    if (auto v = interchangeLaws(I, rng, s)) return v;
    return std::nullopt;
  });
}

// ---- framed structure -------------------------------------------------------

namespace {

Maybe companionLaws(const Instance& I, Rng& rng, const Sampler& s) {
  Obj a = I.sampleObj(rng, s.maxObj), b = I.sampleObj(rng, s.maxObj);
  auto f = I.sampleVert(rng, a, b);
  if (!f) return std::nullopt;
  dbl::CompanionData cd = dbl::companionConjoint(I, *f);

  if (auto v = eqLaw(I, I.vCompose2(cd.compFromUnit, cd.compToUnit), I.sqUnit(*f),
                     "companion-round-trip"))
    return v;
  {
    auto il = I.invert(I.lunit(cd.companion));
    if (!il) return Violation{"left-unitor-invertible", json{{"cell", I.hcellJson(cd.companion)}}};
    Square snake = I.vCompose2(
        I.vCompose2(*il, I.hCompose2(cd.compFromUnit, cd.compToUnit)), I.runit(cd.companion));
    if (auto v = eqLaw(I, snake, I.sqId(cd.companion), "companion-snake")) return v;
  }
  if (auto v = eqLaw(I, I.vCompose2(cd.conjFromUnit, cd.conjToUnit), I.sqUnit(*f),
                     "conjoint-round-trip"))
    return v;
  {
    auto ir = I.invert(I.runit(cd.conjoint));
    if (!ir) return Violation{"right-unitor-invertible", json{{"cell", I.hcellJson(cd.conjoint)}}};
    Square snake = I.vCompose2(
        I.vCompose2(*ir, I.hCompose2(cd.conjToUnit, cd.conjFromUnit)), I.lunit(cd.conjoint));
    if (auto v = eqLaw(I, snake, I.sqId(cd.conjoint), "conjoint-snake")) return v;
  }
  return std::nullopt;
}

Maybe restrictionCartesianLaws(const Instance& I, Rng& rng, const Sampler& s) {
  std::size_t small = std::min<std::size_t>(s.maxObj, 3);
  Obj a = I.sampleObj(rng, small), b = I.sampleObj(rng, small);
  Obj c = I.sampleObj(rng, small), d = I.sampleObj(rng, small);
  auto f = I.sampleVert(rng, a, c);
  auto g = I.sampleVert(rng, b, d);
  if (!f || !g) return std::nullopt;
  HCell m = I.sampleHCell(rng, c, d, s.maxCell);
  auto res = I.restrictCell(*f, m, *g);

  Obj x = I.sampleObj(rng, 2), y = I.sampleObj(rng, 2);
  auto u = I.sampleVert(rng, x, a);
  auto v = I.sampleVert(rng, y, b);
  if (!u || !v) return std::nullopt;
  HCell w = I.sampleHCell(rng, x, y, 2);
  auto cand = I.sampleSquare(rng, w, m, I.vCompose(*u, *f), I.vCompose(*v, *g));
  if (cand) {
    auto all = dbl::factorExhaustive(I, {res.cart, false}, *cand, *u, *v);
    if (all.size() != 1)
      return Violation{"restriction-cartesian",
                       json{{"factorizations", all.size()},
                            {"candidate", I.squareJson(*cand)},
                            {"witness", I.squareJson(res.cart)}}};
    auto uni = dbl::factorUniversal(I, {res.cart, false}, *cand, *u, *v);
    if (!uni || !I.squareEq(*uni, all[0]))
      return Violation{"restriction-factor-agreement", json{{"candidate", I.squareJson(*cand)}}};
  }

  // dual: extension witness is opcartesian
  HCell m2 = I.sampleHCell(rng, a, b, s.maxCell);
  auto ext = I.extendCell(*f, m2, *g);
  Obj x2 = I.sampleObj(rng, 2), y2 = I.sampleObj(rng, 2);
  auto u2 = I.sampleVert(rng, c, x2);
  auto v2 = I.sampleVert(rng, d, y2);
  if (u2 && v2) {
    HCell w2 = I.sampleHCell(rng, x2, y2, 2);
    auto cand2 = I.sampleSquare(rng, m2, w2, I.vCompose(*f, *u2), I.vCompose(*g, *v2));
    if (cand2) {
      auto all2 = dbl::factorExhaustive(I, {ext.opcart, true}, *cand2, *u2, *v2);
      if (all2.size() != 1)
        return Violation{"extension-opcartesian",
                         json{{"factorizations", all2.size()},
                              {"candidate", I.squareJson(*cand2)},
                              {"witness", I.squareJson(ext.opcart)}}};
      auto uni2 = dbl::factorUniversal(I, {ext.opcart, true}, *cand2, *u2, *v2);
      if (!uni2 || !I.squareEq(*uni2, all2[0]))
        return Violation{"extension-factor-agreement", json{{"candidate", I.squareJson(*cand2)}}};
    }
  }

  dbl::BcoReport bco = dbl::bcObjectsRepresent(I, *f, m, *g);
  if (!bco.pass)
    return Violation{"restriction-represented",
                     json{{"detail", bco.detail}, {"cell", I.hcellJson(m)}}};
  return std::nullopt;
}

}  // namespace

LawReport checkFramedStructure(const Instance& I, const Sampler& s) {
  return runSamples("framed-structure " + I.name(), s, [&](Rng& rng) -> Maybe {
    if (auto v = companionLaws(I, rng, s)) return v;
    if (auto v = restrictionCartesianLaws(I, rng, s)) return v;
    return std::nullopt;
  });
}

// ---- functors ----------------------------------------------------------------

FramedFunctor identityFunctor(const Instance& I) {
  FramedFunctor f;
  f.dom = &I;
  f.cod = &I;
  f.name = "identity";
  f.flavor = Flavor::Strong;
  f.onObj = [](const Obj& a) { return a; };
  f.onVert = [](const Vert& v) { return v; };
  f.onCell = [](const HCell& m) { return m; };
  f.onSquare = [](const Square& q) { return q; };
  f.compCmp = [&I](const HCell& m, const HCell& n) { return I.sqId(I.hCompose(m, n)); };
  f.unitCmp = [&I](const Obj& a) { return I.sqId(I.hUnit(a)); };
  return f;
}

FramedFunctor composeFunctors(const FramedFunctor& f, const FramedFunctor& g) {
  if (f.cod != g.dom)
    throw InputError("functor composition: codomain and domain instances differ");
  if (laxOriented(f.flavor) != laxOriented(g.flavor))
    throw InputError("functor composition: comparison squares have opposite orientations");
  FramedFunctor h;
  h.dom = f.dom;
  h.cod = g.cod;
  h.name = g.name + " after " + f.name;
  if (laxOriented(f.flavor))
    h.flavor = (f.flavor == Flavor::Strong && g.flavor == Flavor::Strong) ? Flavor::Strong
                                                                          : Flavor::Lax;
  else
    h.flavor = (f.flavor == Flavor::Normal && g.flavor == Flavor::Normal) ? Flavor::Normal
                                                                          : Flavor::Oplax;
  h.onObj = [f, g](const Obj& a) { return g.onObj(f.onObj(a)); };
  h.onVert = [f, g](const Vert& v) { return g.onVert(f.onVert(v)); };
  h.onCell = [f, g](const HCell& m) { return g.onCell(f.onCell(m)); };
  h.onSquare = [f, g](const Square& q) { return g.onSquare(f.onSquare(q)); };
  if (laxOriented(f.flavor)) {
    h.compCmp = [f, g, cod = g.cod](const HCell& m, const HCell& n) {
      // G F M ⊙ G F N ⇒ G(F M ⊙ F N) ⇒ G F (M ⊙ N)
      return cod->vCompose2(g.compCmp(f.onCell(m), f.onCell(n)), g.onSquare(f.compCmp(m, n)));
    };
    h.unitCmp = [f, g, cod = g.cod](const Obj& a) {
      return cod->vCompose2(g.unitCmp(f.onObj(a)), g.onSquare(f.unitCmp(a)));
    };
  } else {
    h.compCmp = [f, g, cod = g.cod](const HCell& m, const HCell& n) {
      // G F(M ⊙ N) ⇒ G(F M ⊙ F N) ⇒ G F M ⊙ G F N
      return cod->vCompose2(g.onSquare(f.compCmp(m, n)), g.compCmp(f.onCell(m), f.onCell(n)));
    };
    h.unitCmp = [f, g, cod = g.cod](const Obj& a) {
      return cod->vCompose2(g.onSquare(f.unitCmp(a)), g.unitCmp(f.onObj(a)));
    };
  }
  return h;
}

FramedTransformation identityTransformation(const FramedFunctor& F) {
  FramedTransformation t;
  t.name = "identity on " + F.name;
  t.onObj = [F, cod = F.cod](const Obj& a) { return cod->vId(F.onObj(a)); };
  t.onCell = [F, cod = F.cod](const HCell& m) { return cod->sqId(F.onCell(m)); };
  return t;
}

PreservationReport checkCartesianPreservation(const FramedFunctor& F, const Vert& f,
                                              const HCell& m, const Vert& g) {
  PreservationReport r;
  const Instance &D = *F.dom, &E = *F.cod;
  auto res = D.restrictCell(f, m, g);
  Square fc = F.onSquare(res.cart);
  auto resE = E.restrictCell(F.onVert(f), F.onCell(m), F.onVert(g));
  auto chi = E.factorCart(resE.cart, fc, E.vId(fc.src.lf), E.vId(fc.src.rf));
  if (!chi) {
    r.pass = false;
    r.detail = "image of the cartesian witness does not factor through the codomain restriction";
    r.witness = json{{"image", E.squareJson(fc)}, {"codomainWitness", E.squareJson(resE.cart)}};
    return r;
  }
  auto inv = E.invert(*chi);
  r.pass = inv.has_value();
  r.detail = r.pass ? "comparison square invertible"
                    : "comparison square between the image of the restriction and the "
                      "restriction of the image is not invertible";
  r.witness = json{{"comparison", E.squareJson(*chi)},
                   {"imageOfRestriction", E.hcellJson(chi->src)},
                   {"restrictionOfImage", E.hcellJson(chi->tgt)}};
  return r;
}

PreservationReport checkOpcartesianPreservation(const FramedFunctor& F, const Vert& f,
                                                const HCell& m, const Vert& g) {
  PreservationReport r;
  const Instance &D = *F.dom, &E = *F.cod;
  auto ext = D.extendCell(f, m, g);
  Square fo = F.onSquare(ext.opcart);
  auto extE = E.extendCell(F.onVert(f), F.onCell(m), F.onVert(g));
  auto chi = E.factorOpcart(extE.opcart, fo, E.vId(fo.tgt.lf), E.vId(fo.tgt.rf));
  if (!chi) {
    r.pass = false;
    r.detail = "image of the opcartesian witness does not factor through the codomain extension";
    r.witness = json{{"image", E.squareJson(fo)}, {"codomainWitness", E.squareJson(extE.opcart)}};
    return r;
  }
  auto inv = E.invert(*chi);
  r.pass = inv.has_value();
  r.detail = r.pass ? "comparison square invertible"
                    : "comparison square between the extension of the image and the image "
                      "of the extension is not invertible";
  r.witness = json{{"comparison", E.squareJson(*chi)},
                   {"extensionOfImage", E.hcellJson(chi->src)},
                   {"imageOfExtension", E.hcellJson(chi->tgt)}};
  return r;
}

namespace {

Maybe functorBaseLaws(const FramedFunctor& F, Rng& rng, const Sampler& s) {
  const Instance &D = *F.dom, &E = *F.cod;
  CellChain ch = sampleChain(D, rng, 1, s);
  const HCell& m = ch.cells[0];

  HCell fm = F.onCell(m);
  if (!E.objEq(fm.lf, F.onObj(m.lf)) || !E.objEq(fm.rf, F.onObj(m.rf)))
    return Violation{"functor-frame-equation",
                     json{{"cell", D.hcellJson(m)}, {"image", E.hcellJson(fm)}}};

  Obj b0 = D.sampleObj(rng, s.maxObj), b1 = D.sampleObj(rng, s.maxObj),
      b2 = D.sampleObj(rng, s.maxObj);
  auto f = D.sampleVert(rng, b0, b1);
  auto g = D.sampleVert(rng, b1, b2);
  if (f && g) {
    if (auto v = eqVertLaw(E, F.onVert(D.vId(b0)), E.vId(F.onObj(b0)), "functor-vertical-identity"))
      return v;
    if (auto v = eqVertLaw(E, F.onVert(D.vCompose(*f, *g)),
                           E.vCompose(F.onVert(*f), F.onVert(*g)),
                           "functor-vertical-composition"))
      return v;
  }

  if (auto v = eqLaw(E, F.onSquare(D.sqId(m)), E.sqId(fm), "functor-identity-square")) return v;

  auto grid = sampleGrid(D, rng, 3, 2, s);
  if (grid) {
    const Square &al = grid->squares[0][0], &al2 = grid->squares[1][0];
    if (auto v = eqLaw(E, F.onSquare(D.vCompose2(al, al2)),
                       E.vCompose2(F.onSquare(al), F.onSquare(al2)),
                       "functor-vertical-square-composition"))
      return v;
    Square fim = F.onSquare(al);
    if (!E.vertEq(fim.la, F.onVert(grid->verts[0][0])) ||
        !E.vertEq(fim.ra, F.onVert(grid->verts[0][1])) || !dbl::framesOk(E, fim))
      return Violation{"functor-square-frames", json{{"image", E.squareJson(fim)}}};
  }
  return std::nullopt;
}

Maybe functorComparisonLaws(const FramedFunctor& F, Rng& rng, const Sampler& s, bool& compIso,
                            bool& unitIso) {
  const Instance &D = *F.dom, &E = *F.cod;
  const bool lax = laxOriented(F.flavor);
  CellChain ch = sampleChain(D, rng, 3, s);
  const HCell &m = ch.cells[0], &n = ch.cells[1], &p = ch.cells[2];
  const Obj &a = ch.objs[0], &b = ch.objs[1];
  HCell fm = F.onCell(m), fn = F.onCell(n), fp = F.onCell(p);

  Square cmp = F.compCmp(m, n);
  Square uni = F.unitCmp(a);

  // shapes
  {
    HCell outside = E.hCompose(fm, fn);
    HCell inside = F.onCell(D.hCompose(m, n));
    const HCell &wantSrc = lax ? outside : inside, &wantTgt = lax ? inside : outside;
    if (!dbl::globular(E, cmp) || !E.hcellEq(cmp.src, wantSrc) || !E.hcellEq(cmp.tgt, wantTgt))
      return Violation{"comparison-shape", json{{"square", E.squareJson(cmp)}}};
    HCell u0 = E.hUnit(F.onObj(a));
    HCell fu = F.onCell(D.hUnit(a));
    const HCell &wantUSrc = lax ? u0 : fu, &wantUTgt = lax ? fu : u0;
    if (!dbl::globular(E, uni) || !E.hcellEq(uni.src, wantUSrc) || !E.hcellEq(uni.tgt, wantUTgt))
      return Violation{"unit-comparison-shape", json{{"square", E.squareJson(uni)}}};
  }

  if (!E.invert(cmp)) compIso = false;
  if (!E.invert(uni)) unitIso = false;

  // coherence with the associator
  {
    Square l, r;
    if (lax) {
      l = E.vCompose2(E.vCompose2(E.hCompose2(cmp, E.sqId(fp)), F.compCmp(D.hCompose(m, n), p)),
                      F.onSquare(D.assoc(m, n, p)));
      r = E.vCompose2(E.vCompose2(E.assoc(fm, fn, fp), E.hCompose2(E.sqId(fm), F.compCmp(n, p))),
                      F.compCmp(m, D.hCompose(n, p)));
    } else {
      l = E.vCompose2(E.vCompose2(F.compCmp(D.hCompose(m, n), p), E.hCompose2(cmp, E.sqId(fp))),
                      E.assoc(fm, fn, fp));
      r = E.vCompose2(E.vCompose2(F.onSquare(D.assoc(m, n, p)), F.compCmp(m, D.hCompose(n, p))),
                      E.hCompose2(E.sqId(fm), F.compCmp(n, p)));
    }
    if (auto v = eqLaw(E, l, r, "comparison-associativity")) return v;
  }

  // coherence with the unitors
  {
    Square l, r;
    if (lax) {
      l = E.vCompose2(E.vCompose2(E.hCompose2(uni, E.sqId(fm)), F.compCmp(D.hUnit(a), m)),
                      F.onSquare(D.lunit(m)));
      r = E.lunit(fm);
    } else {
      l = E.vCompose2(E.vCompose2(F.compCmp(D.hUnit(a), m), E.hCompose2(uni, E.sqId(fm))),
                      E.lunit(fm));
      r = F.onSquare(D.lunit(m));
    }
    if (auto v = eqLaw(E, l, r, "comparison-left-unit")) return v;

    Square ub = F.unitCmp(b);
    if (lax) {
      l = E.vCompose2(E.vCompose2(E.hCompose2(E.sqId(fm), ub), F.compCmp(m, D.hUnit(b))),
                      F.onSquare(D.runit(m)));
      r = E.runit(fm);
    } else {
      l = E.vCompose2(E.vCompose2(F.compCmp(m, D.hUnit(b)), E.hCompose2(E.sqId(fm), ub)),
                      E.runit(fm));
      r = F.onSquare(D.runit(m));
    }
    if (auto v = eqLaw(E, l, r, "comparison-right-unit")) return v;
  }

  // naturality of the comparisons
  auto grid = sampleGrid(D, rng, 2, 2, s);
  if (grid) {
    const Square &al = grid->squares[0][0], &be = grid->squares[0][1];
    const HCell &tm = grid->rows[0].cells[0], &tn = grid->rows[0].cells[1];
    const HCell &bm = grid->rows[1].cells[0], &bn = grid->rows[1].cells[1];
    Square l, r;
    if (lax) {
      l = E.vCompose2(E.hCompose2(F.onSquare(al), F.onSquare(be)), F.compCmp(bm, bn));
      r = E.vCompose2(F.compCmp(tm, tn), F.onSquare(D.hCompose2(al, be)));
    } else {
      l = E.vCompose2(F.onSquare(D.hCompose2(al, be)), F.compCmp(bm, bn));
      r = E.vCompose2(F.compCmp(tm, tn), E.hCompose2(F.onSquare(al), F.onSquare(be)));
    }
    if (auto v = eqLaw(E, l, r, "comparison-natural")) return v;

    const Vert& f0 = grid->verts[0][0];
    Square ua = F.unitCmp(grid->rows[0].objs[0]);
    Square ua2 = F.unitCmp(grid->rows[1].objs[0]);
    if (lax) {
      l = E.vCompose2(ua, F.onSquare(D.sqUnit(f0)));
      r = E.vCompose2(E.sqUnit(F.onVert(f0)), ua2);
    } else {
      l = E.vCompose2(F.onSquare(D.sqUnit(f0)), ua2);
      r = E.vCompose2(ua, E.sqUnit(F.onVert(f0)));
    }
    if (auto v = eqLaw(E, l, r, "unit-comparison-natural")) return v;
  }
  return std::nullopt;
}

Maybe functorPreservationLaws(const FramedFunctor& F, Rng& rng, const Sampler& s) {
  const Instance& D = *F.dom;
  std::size_t small = std::min<std::size_t>(s.maxObj, 3);
  Obj a = D.sampleObj(rng, small), b = D.sampleObj(rng, small);
  Obj c = D.sampleObj(rng, small), d = D.sampleObj(rng, small);
  auto f = D.sampleVert(rng, a, c);
  auto g = D.sampleVert(rng, b, d);
  if (!f || !g) return std::nullopt;
  if (laxOriented(F.flavor)) {
    HCell m = D.sampleHCell(rng, c, d, s.maxCell);
    PreservationReport pr = checkCartesianPreservation(F, *f, m, *g);
    if (!pr.pass) return Violation{"cartesian-preservation", pr.witness};
  } else {
    HCell m = D.sampleHCell(rng, a, b, s.maxCell);
    PreservationReport pr = checkOpcartesianPreservation(F, *f, m, *g);
    if (!pr.pass) return Violation{"opcartesian-preservation", pr.witness};
  }
  return std::nullopt;
}

}  // namespace

LawReport checkFramedFunctor(const FramedFunctor& F, const Sampler& s) {
  if (!F.dom || !F.cod) throw InputError("framed functor is missing its instances");
  bool compIso = true, unitIso = true;
  LawReport rep =
      runSamples("framed-functor " + F.name, s, [&](Rng& rng) -> Maybe {
        if (auto v = functorBaseLaws(F, rng, s)) return v;
        if (auto v = functorComparisonLaws(F, rng, s, compIso, unitIso)) return v;
        if (auto v = functorPreservationLaws(F, rng, s)) return v;
        return std::nullopt;
      });
  if (rep.pass) {
    rep.notes.push_back("declared flavor: " + flavorName(F.flavor));
    if (compIso && unitIso)
      rep.notes.push_back("all comparison squares invertible on samples (strong)");
    else if (unitIso)
      rep.notes.push_back("all unit comparisons invertible on samples (normal)");
    if (F.flavor == Flavor::Strong && !(compIso && unitIso)) {
      rep.pass = false;
      rep.lawName = "declared-strength";
      rep.witness = json{{"detail", "functor declared strong but a comparison square "
                                    "failed to invert"}};
    }
    if (F.flavor == Flavor::Normal && !unitIso) {
      rep.pass = false;
      rep.lawName = "declared-normality";
      rep.witness = json{{"detail", "functor declared normal but a unit comparison failed "
                                    "to invert"}};
    }
  }
  return rep;
}

// ---- transformations -----------------------------------------------------------

namespace {

Maybe transformationLaws(const FramedTransformation& t, const FramedFunctor& F,
                         const FramedFunctor& G, Rng& rng, const Sampler& s) {
  const Instance &D = *F.dom, &E = *F.cod;
  const bool lax = laxOriented(F.flavor);
  CellChain ch = sampleChain(D, rng, 2, s);
  const HCell &m = ch.cells[0], &n = ch.cells[1];
  const Obj &a = ch.objs[0], &b = ch.objs[1];

  Square tm = t.onCell(m);
  if (!E.hcellEq(tm.src, F.onCell(m)) || !E.hcellEq(tm.tgt, G.onCell(m)) ||
      !E.vertEq(tm.la, t.onObj(a)) || !E.vertEq(tm.ra, t.onObj(b)))
    return Violation{"transformation-frames", json{{"component", E.squareJson(tm)}}};

  Obj b2 = D.sampleObj(rng, s.maxObj);
  if (auto f = D.sampleVert(rng, a, b2)) {
    if (auto v = eqVertLaw(E, E.vCompose(F.onVert(*f), t.onObj(b2)),
                           E.vCompose(t.onObj(a), G.onVert(*f)),
                           "transformation-vertical-naturality"))
      return v;
  }

  auto grid = sampleGrid(D, rng, 2, 1, s);
  if (grid) {
    const Square& al = grid->squares[0][0];
    const HCell &tmc = grid->rows[0].cells[0], &bmc = grid->rows[1].cells[0];
    if (auto v = eqLaw(E, E.vCompose2(F.onSquare(al), t.onCell(bmc)),
                       E.vCompose2(t.onCell(tmc), G.onSquare(al)),
                       "transformation-square-naturality"))
      return v;
  }

  Square l, r;
  if (lax) {
    l = E.vCompose2(F.compCmp(m, n), t.onCell(D.hCompose(m, n)));
    r = E.vCompose2(E.hCompose2(t.onCell(m), t.onCell(n)), G.compCmp(m, n));
  } else {
    l = E.vCompose2(F.compCmp(m, n), E.hCompose2(t.onCell(m), t.onCell(n)));
    r = E.vCompose2(t.onCell(D.hCompose(m, n)), G.compCmp(m, n));
  }
  if (auto v = eqLaw(E, l, r, "transformation-composition-pasting")) return v;

  if (lax) {
    l = E.vCompose2(F.unitCmp(a), t.onCell(D.hUnit(a)));
    r = E.vCompose2(E.sqUnit(t.onObj(a)), G.unitCmp(a));
  } else {
    l = E.vCompose2(t.onCell(D.hUnit(a)), G.unitCmp(a));
    r = E.vCompose2(F.unitCmp(a), E.sqUnit(t.onObj(a)));
  }
  if (auto v = eqLaw(E, l, r, "transformation-unit-pasting")) return v;
  return std::nullopt;
}

}  // namespace

LawReport checkFramedTransformation(const FramedTransformation& t, const FramedFunctor& F,
                                    const FramedFunctor& G, const Sampler& s) {
  if (F.dom != G.dom || F.cod != G.cod)
    throw InputError("transformation endpoints do not share domain and codomain");
  if (laxOriented(F.flavor) != laxOriented(G.flavor))
    throw InputError("transformation endpoints have opposite comparison orientations");
  return runSamples("framed-transformation " + t.name, s,
                    [&](Rng& rng) -> Maybe { return transformationLaws(t, F, G, rng, s); });
}

OplaxLowering lowerToOplax(const FramedTransformation& t, const FramedFunctor& F,
                           const FramedFunctor& G) {
  if (F.dom != G.dom || F.cod != G.cod)
    throw InputError("transformation endpoints do not share domain and codomain");
  const Instance* E = F.cod;
  OplaxLowering low;
  low.onObj = [t, E](const Obj& a) -> HCell {
    Vert al = t.onObj(a);
    return E->restrictCell(al, E->hUnit(al.cod), E->vId(al.cod)).cell;
  };
  low.onCell = [t, F, G, E](const HCell& m) -> Square {
    Vert aa = t.onObj(m.lf), ab = t.onObj(m.rf);
    auto ra = E->restrictCell(aa, E->hUnit(aa.cod), E->vId(aa.cod));
    auto rb = E->restrictCell(ab, E->hUnit(ab.cod), E->vId(ab.cod));
    HCell gm = G.onCell(m);
    Square w = E->vCompose2(E->hCompose2(ra.cart, E->sqId(gm)), E->lunit(gm));
    Square cand = E->vCompose2(E->hCompose2(t.onCell(m), rb.cart), E->runit(gm));
    auto chi = E->factorCart(w, cand, E->vId(aa.dom), E->vId(gm.rf));
    if (!chi)
      throw InputError(
          "transformation lowering: candidate square does not factor through the "
          "cartesian composite");
    return *chi;
  };
  return low;
}

LawReport checkOplaxNaturality(const OplaxLowering& low, const FramedFunctor& F,
                               const FramedFunctor& G, const Sampler& s) {
  const Instance &D = *F.dom, &E = *F.cod;
  return runSamples("oplax-lowering", s, [&](Rng& rng) -> Maybe {
    Obj a = D.sampleObj(rng, s.maxObj), b = D.sampleObj(rng, s.maxObj);
    HCell m = D.sampleHCell(rng, a, b, s.maxCell);
    HCell la = low.onObj(a), lb = low.onObj(b);
    Square lm = low.onCell(m);
    if (!dbl::globular(E, lm) || !E.hcellEq(lm.src, E.hCompose(F.onCell(m), lb)) ||
        !E.hcellEq(lm.tgt, E.hCompose(la, G.onCell(m))))
      return Violation{"lowered-frames", json{{"component", E.squareJson(lm)}}};

    HCell n = D.sampleHCell(rng, a, b, s.maxCell);
    auto sigma = D.sampleSquare(rng, m, n, D.vId(a), D.vId(b));
    if (!sigma) return std::nullopt;
    Square l = E.vCompose2(E.hCompose2(F.onSquare(*sigma), E.sqId(lb)), low.onCell(n));
    Square r = E.vCompose2(low.onCell(m), E.hCompose2(E.sqId(la), G.onSquare(*sigma)));
    return eqLaw(E, l, r, "lowered-naturality");
  });
}

// ---- equivalences ----------------------------------------------------------------

namespace {

Maybe globularFullFaithful(const FramedFunctor& F, Rng& rng, const Sampler& s) {
  const Instance &D = *F.dom, &E = *F.cod;
  std::size_t small = std::min<std::size_t>(s.maxObj, 3);
  Obj a = D.sampleObj(rng, small), b = D.sampleObj(rng, small);
  HCell m = D.sampleHCell(rng, a, b, std::min<std::size_t>(s.maxCell, 3));
  HCell n = D.sampleHCell(rng, a, b, std::min<std::size_t>(s.maxCell, 3));

  std::vector<Square> images;
  D.forEachSquare(m, n, D.vId(a), D.vId(b), [&](const Square& q) {
    images.push_back(F.onSquare(q));
    return true;
  });
  std::vector<Square> codSquares;
  E.forEachSquare(F.onCell(m), F.onCell(n), E.vId(F.onObj(a)), E.vId(F.onObj(b)),
                  [&](const Square& q) {
                    codSquares.push_back(q);
                    return true;
                  });
  for (const Square& sig : codSquares) {
    bool hit = false;
    for (const Square& im : images)
      if (E.squareEq(im, sig)) {
        hit = true;
        break;
      }
    if (!hit)
      return Violation{"globular-fullness",
                       json{{"squareWithoutPreimage", E.squareJson(sig)},
                            {"source", D.hcellJson(m)},
                            {"target", D.hcellJson(n)}}};
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (E.squareEq(images[i], images[j]))
        return Violation{"globular-faithfulness",
                         json{{"collapsedImage", E.squareJson(images[i])},
                              {"source", D.hcellJson(m)},
                              {"target", D.hcellJson(n)}}};
  return std::nullopt;
}

Maybe verticalFullFaithful(const FramedFunctor& F, Rng& rng, const Sampler& s) {
  const Instance &D = *F.dom, &E = *F.cod;
  std::size_t small = std::min<std::size_t>(s.maxObj, 3);
  Obj a = D.sampleObj(rng, small), b = D.sampleObj(rng, small);
  std::vector<Vert> images;
  D.forEachVert(a, b, [&](const Vert& f) {
    images.push_back(F.onVert(f));
    return true;
  });
  std::vector<Vert> codVerts;
  E.forEachVert(F.onObj(a), F.onObj(b), [&](const Vert& f) {
    codVerts.push_back(f);
    return true;
  });
  for (const Vert& k : codVerts) {
    bool hit = false;
    for (const Vert& im : images)
      if (E.vertEq(im, k)) {
        hit = true;
        break;
      }
    if (!hit) return Violation{"vertical-fullness", json{{"arrowWithoutPreimage", E.vertJson(k)}}};
  }
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      if (E.vertEq(images[i], images[j]))
        return Violation{"vertical-faithfulness", json{{"collapsedImage", E.vertJson(images[i])}}};
  return std::nullopt;
}

Maybe essentialSurjectivity(const FramedFunctor& F, const EquivalenceChoices& ch, Rng& rng,
                            const Sampler& s) {
  const Instance& E = *F.cod;
  Obj c = E.sampleObj(rng, s.maxObj), d = E.sampleObj(rng, s.maxObj);
  auto ac = ch.objInverse(c);
  auto ad = ch.objInverse(d);
  if (!ac || !ad)
    return Violation{"object-choice-missing", json{{"object", E.objJson(!ac ? c : d)}}};
  auto ic = ch.objIso(c);
  auto id_ = ch.objIso(d);
  if (!ic || !id_)
    return Violation{"object-iso-missing", json{{"object", E.objJson(!ic ? c : d)}}};
  if (!E.objEq(ic->dom, F.onObj(*ac)) || !E.objEq(ic->cod, c))
    return Violation{"object-iso-frames", json{{"iso", E.vertJson(*ic)}}};
  try {
    vertInverse(E, *ic);
    vertInverse(E, *id_);
  } catch (const InputError&) {
    return Violation{"object-iso-invertible", json{{"iso", E.vertJson(*ic)}}};
  }

  HCell nn = E.sampleHCell(rng, c, d, s.maxCell);
  auto mn = ch.cellInverse(nn);
  if (!mn) return Violation{"cell-choice-missing", json{{"cell", E.hcellJson(nn)}}};
  auto om = ch.cellIso(nn);
  if (!om) return Violation{"cell-iso-missing", json{{"cell", E.hcellJson(nn)}}};
  if (!E.hcellEq(om->src, F.onCell(*mn)) || !E.hcellEq(om->tgt, nn) || !E.vertEq(om->la, *ic) ||
      !E.vertEq(om->ra, *id_))
    return Violation{"cell-iso-frames", json{{"iso", E.squareJson(*om)}}};
  if (!E.invert(*om)) return Violation{"cell-iso-invertible", json{{"iso", E.squareJson(*om)}}};
  return std::nullopt;
}

}  // namespace

LawReport checkEquivalence(const FramedFunctor& F, const EquivalenceChoices& ch,
                           const Sampler& s) {
  return runSamples("equivalence " + F.name, s, [&](Rng& rng) -> Maybe {
    // strength of F on a sampled pair
    {
      const Instance &D = *F.dom, &E = *F.cod;
      CellChain c2 = sampleChain(D, rng, 2, s);
      if (!E.invert(F.compCmp(c2.cells[0], c2.cells[1])) || !E.invert(F.unitCmp(c2.objs[0])))
        return Violation{"strength", json{{"detail", "comparison square failed to invert"}}};
    }
    if (auto v = verticalFullFaithful(F, rng, s)) return v;
    if (auto v = globularFullFaithful(F, rng, s)) return v;
    if (auto v = essentialSurjectivity(F, ch, rng, s)) return v;
    return std::nullopt;
  });
}

namespace {

Vert uniqueVertPreimage(const FramedFunctor& F, const Obj& a, const Obj& b, const Vert& target,
                        const char* what) {
  std::vector<Vert> hits;
  F.dom->forEachVert(a, b, [&](const Vert& f) {
    if (F.cod->vertEq(F.onVert(f), target)) hits.push_back(f);
    return hits.size() < 2;
  });
  if (hits.size() != 1)
    throw InputError(std::string(what) +
                     ": vertical preimage is not unique (functor not full and faithful)");
  return hits[0];
}

Square uniqueSquarePreimage(const FramedFunctor& F, const HCell& src, const HCell& tgt,
                            const Vert& la, const Vert& ra, const Square& target,
                            const char* what) {
  std::vector<Square> hits;
  F.dom->forEachSquare(src, tgt, la, ra, [&](const Square& q) {
    if (F.cod->squareEq(F.onSquare(q), target)) hits.push_back(q);
    return hits.size() < 2;
  });
  if (hits.size() != 1)
    throw InputError(std::string(what) +
                     ": square preimage is not unique (functor not full and faithful)");
  return hits[0];
}

Square invertOrThrow(const Instance& I, const Square& q, const char* what) {
  auto inv = I.invert(q);
  if (!inv) throw InputError(std::string(what) + ": square is not invertible");
  return *inv;
}

}  // namespace

InverseBuild buildInverse(const FramedFunctor& F, const EquivalenceChoices& ch) {
  if (!laxOriented(F.flavor))
    throw InputError("inverse construction expects lax-oriented comparison squares");
  const Instance *Dp = F.dom, *Ep = F.cod;

  auto objInv = [ch](const Obj& c) -> Obj {
    auto a = ch.objInverse(c);
    if (!a) throw InputError("equivalence choices are missing an object preimage");
    return *a;
  };
  auto objIso = [ch](const Obj& c) -> Vert {
    auto i = ch.objIso(c);
    if (!i) throw InputError("equivalence choices are missing an object iso");
    return *i;
  };
  auto cellInv = [ch](const HCell& n) -> HCell {
    auto m = ch.cellInverse(n);
    if (!m) throw InputError("equivalence choices are missing a cell preimage");
    return *m;
  };
  auto cellIso = [ch](const HCell& n) -> Square {
    auto i = ch.cellIso(n);
    if (!i) throw InputError("equivalence choices are missing a cell iso");
    return *i;
  };

  FramedFunctor G;
  G.dom = Ep;
  G.cod = Dp;
  G.name = F.name + "-inverse";
  G.flavor = Flavor::Strong;
  G.onObj = [objInv](const Obj& c) { return objInv(c); };
  G.onVert = [F, objInv, objIso, Ep](const Vert& k) -> Vert {
    Obj ac = objInv(k.dom), ad = objInv(k.cod);
    Vert target = Ep->vCompose(Ep->vCompose(objIso(k.dom), k), vertInverse(*Ep, objIso(k.cod)));
    return uniqueVertPreimage(F, ac, ad, target, "inverse on vertical arrows");
  };
  G.onCell = [cellInv](const HCell& n) { return cellInv(n); };
  G.onSquare = [F, G, cellInv, cellIso, Ep](const Square& q) -> Square {
    // reflect  ω_N ; q ; ω_{N'}⁻¹  through F
    Square target = Ep->vCompose2(Ep->vCompose2(cellIso(q.src), q),
                                  invertOrThrow(*Ep, cellIso(q.tgt), "inverse on squares"));
    return uniqueSquarePreimage(F, cellInv(q.src), cellInv(q.tgt), G.onVert(q.la), G.onVert(q.ra),
                                target, "inverse on squares");
  };
  G.compCmp = [F, cellInv, cellIso, Dp, Ep](const HCell& n, const HCell& n2) -> Square {
    HCell gn = cellInv(n), gn2 = cellInv(n2);
    HCell nn2 = Ep->hCompose(n, n2);
    Square target = Ep->vCompose2(
        Ep->vCompose2(invertOrThrow(*Ep, F.compCmp(gn, gn2), "inverse composition square"),
                      Ep->hCompose2(cellIso(n), cellIso(n2))),
        invertOrThrow(*Ep, cellIso(nn2), "inverse composition square"));
    return uniqueSquarePreimage(F, Dp->hCompose(gn, gn2), cellInv(nn2),
                                Dp->vId(gn.lf), Dp->vId(gn2.rf), target,
                                "inverse composition square");
  };
  G.unitCmp = [F, cellInv, cellIso, objInv, objIso, Dp, Ep](const Obj& c) -> Square {
    Obj ac = objInv(c);
    HCell uc = Ep->hUnit(c);
    Square target = Ep->vCompose2(
        Ep->vCompose2(invertOrThrow(*Ep, F.unitCmp(ac), "inverse unit square"),
                      Ep->sqUnit(objIso(c))),
        invertOrThrow(*Ep, cellIso(uc), "inverse unit square"));
    return uniqueSquarePreimage(F, Dp->hUnit(ac), cellInv(uc), Dp->vId(ac), Dp->vId(ac), target,
                                "inverse unit square");
  };

  FramedTransformation unit;
  unit.name = "unit of " + F.name + "-inverse";
  unit.onObj = [F, objInv, objIso, Ep](const Obj& a) -> Vert {
    Obj gfa = objInv(F.onObj(a));
    Vert target = vertInverse(*Ep, objIso(F.onObj(a)));  // F a → F(A_{F a})
    return uniqueVertPreimage(F, a, gfa, target, "unit component");
  };
  unit.onCell = [F, unit, cellInv, cellIso, Ep](const HCell& m) -> Square {
    HCell fm = F.onCell(m);
    Square target = invertOrThrow(*Ep, cellIso(fm), "unit component");
    return uniqueSquarePreimage(F, m, cellInv(fm), unit.onObj(m.lf), unit.onObj(m.rf), target,
                                "unit component");
  };

  FramedTransformation counit;
  counit.name = "counit of " + F.name + "-inverse";
  counit.onObj = [objIso](const Obj& c) { return objIso(c); };
  counit.onCell = [cellIso](const HCell& n) { return cellIso(n); };

  return InverseBuild{std::move(G), std::move(unit), std::move(counit)};
}

// ---- adjunctions ------------------------------------------------------------------

LawReport checkFramedAdjunction(const FramedFunctor& F, const FramedFunctor& G,
                                const FramedTransformation& unit,
                                const FramedTransformation& counit, const Sampler& s) {
  if (F.dom != G.cod || F.cod != G.dom)
    throw InputError("adjunction endpoints do not match up");
  const Instance &D = *F.dom, &E = *F.cod;

  {
    LawReport u = checkFramedTransformation(unit, identityFunctor(D), composeFunctors(F, G), s);
    if (!u.pass) {
      u.lawName = "unit " + u.lawName;
      return u;
    }
    LawReport c = checkFramedTransformation(counit, composeFunctors(G, F), identityFunctor(E), s);
    if (!c.pass) {
      c.lawName = "counit " + c.lawName;
      return c;
    }
  }

  return runSamples("framed-adjunction", s, [&](Rng& rng) -> Maybe {
    // triangle on the left adjoint: (ε F) ∘ (F η) = 1_F
    CellChain ch = sampleChain(D, rng, 2, s);
    const HCell &m = ch.cells[0], &n = ch.cells[1];
    const Obj& a = ch.objs[0];
    if (auto v = eqVertLaw(E, E.vCompose(F.onVert(unit.onObj(a)), counit.onObj(F.onObj(a))),
                           E.vId(F.onObj(a)), "triangle-left-objects"))
      return v;
    if (auto v = eqLaw(E, E.vCompose2(F.onSquare(unit.onCell(m)), counit.onCell(F.onCell(m))),
                       E.sqId(F.onCell(m)), "triangle-left-cells"))
      return v;

    // triangle on the right adjoint: (G ε) ∘ (η G) = 1_G
    Obj z = E.sampleObj(rng, s.maxObj), z2 = E.sampleObj(rng, s.maxObj);
    HCell w = E.sampleHCell(rng, z, z2, s.maxCell);
    if (auto v = eqVertLaw(D, D.vCompose(unit.onObj(G.onObj(z)), G.onVert(counit.onObj(z))),
                           D.vId(G.onObj(z)), "triangle-right-objects"))
      return v;
    if (auto v = eqLaw(D, D.vCompose2(unit.onCell(G.onCell(w)), G.onSquare(counit.onCell(w))),
                       D.sqId(G.onCell(w)), "triangle-right-cells"))
      return v;

    // the left adjoint is strong: the composite below inverts its
    // comparison square
    HCell fm = F.onCell(m), fn = F.onCell(n);
    Square inv = E.vCompose2(
        E.vCompose2(F.onSquare(D.hCompose2(unit.onCell(m), unit.onCell(n))),
                    F.onSquare(G.compCmp(fm, fn))),
        counit.onCell(E.hCompose(fm, fn)));
    if (auto v = eqLaw(E, E.vCompose2(F.compCmp(m, n), inv), E.sqId(E.hCompose(fm, fn)),
                       "left-adjoint-composition-iso"))
      return v;
    if (auto v = eqLaw(E, E.vCompose2(inv, F.compCmp(m, n)),
                       E.sqId(F.onCell(D.hCompose(m, n))), "left-adjoint-composition-iso"))
      return v;
    if (!E.invert(F.unitCmp(a)))
      return Violation{"left-adjoint-unit-iso", json{{"object", D.objJson(a)}}};
    return std::nullopt;
  });
}

// ---- external monoidal structure ----------------------------------------------------

namespace {

Maybe monoidalObjectLaws(const Instance& I, const MonoidalData& d, Rng& rng, const Sampler& s) {
  Obj w = I.sampleObj(rng, s.maxObj), x = I.sampleObj(rng, s.maxObj),
      y = I.sampleObj(rng, s.maxObj), z = I.sampleObj(rng, s.maxObj);

  Vert l = I.vCompose(d.assocObj(d.prodObj(w, x), y, z), d.assocObj(w, x, d.prodObj(y, z)));
  Vert r = I.vCompose(I.vCompose(d.prodVert(d.assocObj(w, x, y), I.vId(z)),
                                 d.assocObj(w, d.prodObj(x, y), z)),
                      d.prodVert(I.vId(w), d.assocObj(x, y, z)));
  if (auto v = eqVertLaw(I, l, r, "object-pentagon")) return v;

  if (auto v = eqVertLaw(I, I.vCompose(d.assocObj(w, d.unitObj, x),
                                       d.prodVert(I.vId(w), d.lunitObj(x))),
                         d.prodVert(d.runitObj(w), I.vId(x)), "object-triangle"))
    return v;

  try {
    vertInverse(I, d.assocObj(w, x, y));
    vertInverse(I, d.lunitObj(w));
    vertInverse(I, d.runitObj(w));
  } catch (const InputError&) {
    return Violation{"object-constraint-invertible", json{{"objects", json::array()}}};
  }

  auto f = I.sampleVert(rng, w, x);
  auto g = I.sampleVert(rng, y, z);
  if (f && g) {
    Obj o2 = I.sampleObj(rng, s.maxObj);
    auto h = I.sampleVert(rng, o2, w);
    if (h) {
      if (auto v = eqVertLaw(
              I, I.vCompose(d.prodVert(d.prodVert(*h, *f), *g),
                            d.assocObj(w, x, z)),
              I.vCompose(d.assocObj(o2, w, y), d.prodVert(*h, d.prodVert(*f, *g))),
              "object-associativity-natural"))
        return v;
    }
    if (auto v = eqVertLaw(I, I.vCompose(d.prodVert(I.vId(d.unitObj), *f), d.lunitObj(x)),
                           I.vCompose(d.lunitObj(w), *f), "object-left-unit-natural"))
      return v;
    if (auto v = eqVertLaw(I, I.vCompose(d.prodVert(*f, I.vId(d.unitObj)), d.runitObj(x)),
                           I.vCompose(d.runitObj(w), *f), "object-right-unit-natural"))
      return v;
  }

  if (d.symObj) {
    if (auto v = eqVertLaw(I, I.vCompose(d.symObj(w, x), d.symObj(x, w)),
                           I.vId(d.prodObj(w, x)), "symmetry-involutive"))
      return v;
    Vert hl = I.vCompose(d.assocObj(w, x, y),
                         I.vCompose(d.symObj(w, d.prodObj(x, y)), d.assocObj(x, y, w)));
    Vert hr = I.vCompose(I.vCompose(d.prodVert(d.symObj(w, x), I.vId(y)), d.assocObj(x, w, y)),
                         d.prodVert(I.vId(x), d.symObj(w, y)));
    if (auto v = eqVertLaw(I, hl, hr, "symmetry-object-hexagon")) return v;
    if (f && g) {
      if (auto v = eqVertLaw(I, I.vCompose(d.prodVert(*f, *g), d.symObj(x, z)),
                             I.vCompose(d.symObj(w, y), d.prodVert(*g, *f)), "symmetry-natural"))
        return v;
    }
  }
  return std::nullopt;
}

Maybe monoidalCellLaws(const Instance& I, const MonoidalData& d, Rng& rng, const Sampler& s) {
  CellChain ca = sampleChain(I, rng, 3, s);
  CellChain cb = sampleChain(I, rng, 3, s);
  const HCell &m = ca.cells[0], &n = ca.cells[1], &o = ca.cells[2];
  const HCell &p = cb.cells[0], &q = cb.cells[1], &r = cb.cells[2];

  HCell mp = d.prodCell(m, p);
  if (!I.objEq(mp.lf, d.prodObj(m.lf, p.lf)) || !I.objEq(mp.rf, d.prodObj(m.rf, p.rf)))
    return Violation{"tensor-frames", json{{"cell", I.hcellJson(mp)}}};

  Square x1 = d.interchange(m, p, n, q);
  if (!dbl::globular(I, x1) ||
      !I.hcellEq(x1.src, I.hCompose(d.prodCell(m, p), d.prodCell(n, q))) ||
      !I.hcellEq(x1.tgt, d.prodCell(I.hCompose(m, n), I.hCompose(p, q))))
    return Violation{"interchange-shape", json{{"square", I.squareJson(x1)}}};
  if (auto v = invertibleLaw(I, x1, "interchange-invertible")) return v;

  Square u1 = d.unitIso(ca.objs[0], cb.objs[0]);
  if (!dbl::globular(I, u1) ||
      !I.hcellEq(u1.src, I.hUnit(d.prodObj(ca.objs[0], cb.objs[0]))) ||
      !I.hcellEq(u1.tgt, d.prodCell(I.hUnit(ca.objs[0]), I.hUnit(cb.objs[0]))))
    return Violation{"unit-iso-shape", json{{"square", I.squareJson(u1)}}};
  if (auto v = invertibleLaw(I, u1, "unit-iso-invertible")) return v;

  // functoriality of ⊗ on squares
  auto ga = sampleGrid(I, rng, 3, 1, s);
  auto gb = sampleGrid(I, rng, 3, 1, s);
  if (ga && gb) {
    const Square &a0 = ga->squares[0][0], &a1 = ga->squares[1][0];
    const Square &b0 = gb->squares[0][0], &b1 = gb->squares[1][0];
    if (auto v = eqLaw(I, d.prodSquare(I.vCompose2(a0, a1), I.vCompose2(b0, b1)),
                       I.vCompose2(d.prodSquare(a0, b0), d.prodSquare(a1, b1)),
                       "tensor-vertical-functorial"))
      return v;
    if (auto v =
            eqLaw(I, d.prodSquare(I.sqId(ga->rows[0].cells[0]), I.sqId(gb->rows[0].cells[0])),
                  I.sqId(d.prodCell(ga->rows[0].cells[0], gb->rows[0].cells[0])),
                  "tensor-identity-square"))
      return v;
  }

  // naturality of the interchange in all four arguments
  auto na = sampleGrid(I, rng, 2, 2, s);
  auto nb = sampleGrid(I, rng, 2, 2, s);
  if (na && nb) {
    const Square &al = na->squares[0][0], &ga2 = na->squares[0][1];
    const Square &be = nb->squares[0][0], &de = nb->squares[0][1];
    const CellChain &ta = na->rows[0], &ba = na->rows[1];
    const CellChain &tb = nb->rows[0], &bb = nb->rows[1];
    Square l = I.vCompose2(I.hCompose2(d.prodSquare(al, be), d.prodSquare(ga2, de)),
                           d.interchange(ba.cells[0], bb.cells[0], ba.cells[1], bb.cells[1]));
    Square r2 = I.vCompose2(d.interchange(ta.cells[0], tb.cells[0], ta.cells[1], tb.cells[1]),
                            d.prodSquare(I.hCompose2(al, ga2), I.hCompose2(be, de)));
    if (auto v = eqLaw(I, l, r2, "interchange-natural")) return v;

    auto f = na->verts[0][0];
    auto g = nb->verts[0][0];
    Square ul = I.vCompose2(I.sqUnit(d.prodVert(f, g)),
                            d.unitIso(ba.objs[0], bb.objs[0]));
    Square ur = I.vCompose2(d.unitIso(ta.objs[0], tb.objs[0]),
                            d.prodSquare(I.sqUnit(f), I.sqUnit(g)));
    if (auto v = eqLaw(I, ul, ur, "unit-iso-natural")) return v;
  }

  // interchange vs associator (the lax-functor hexagon for ⊗)
  {
    Square l = I.vCompose2(
        I.vCompose2(I.hCompose2(x1, I.sqId(d.prodCell(o, r))),
                    d.interchange(I.hCompose(m, n), I.hCompose(p, q), o, r)),
        d.prodSquare(I.assoc(m, n, o), I.assoc(p, q, r)));
    Square r2 = I.vCompose2(
        I.vCompose2(I.assoc(d.prodCell(m, p), d.prodCell(n, q), d.prodCell(o, r)),
                    I.hCompose2(I.sqId(d.prodCell(m, p)), d.interchange(n, q, o, r))),
        d.interchange(m, p, I.hCompose(n, o), I.hCompose(q, r)));
    if (auto v = eqLaw(I, l, r2, "interchange-associativity")) return v;
  }

  // interchange vs unitors
  {
    Square l = I.vCompose2(
        I.vCompose2(I.hCompose2(u1, I.sqId(mp)),
                    d.interchange(I.hUnit(ca.objs[0]), I.hUnit(cb.objs[0]), m, p)),
        d.prodSquare(I.lunit(m), I.lunit(p)));
    if (auto v = eqLaw(I, l, I.lunit(mp), "interchange-left-unit")) return v;
    Square u2 = d.unitIso(ca.objs[1], cb.objs[1]);
    Square rr = I.vCompose2(
        I.vCompose2(I.hCompose2(I.sqId(mp), u2),
                    d.interchange(m, p, I.hUnit(ca.objs[1]), I.hUnit(cb.objs[1]))),
        d.prodSquare(I.runit(m), I.runit(p)));
    if (auto v = eqLaw(I, rr, I.runit(mp), "interchange-right-unit")) return v;
  }

  // restriction distributes over ⊗ (strong functors preserve cartesian squares)
  {
    auto f = I.sampleVert(rng, ca.objs[3], m.lf);
    auto g = I.sampleVert(rng, cb.objs[3], p.lf);
    if (f && g) {
      HCell rf = I.restrictCell(*f, m, I.vId(m.rf)).cell;
      HCell rg = I.restrictCell(*g, p, I.vId(p.rf)).cell;
      HCell both =
          I.restrictCell(d.prodVert(*f, *g), d.prodCell(m, p), I.vId(d.prodObj(m.rf, p.rf)))
              .cell;
      if (!I.findGlobularIso(d.prodCell(rf, rg), both))
        return Violation{"restriction-tensor",
                         json{{"componentwise", I.hcellJson(d.prodCell(rf, rg))},
                              {"joint", I.hcellJson(both)}}};
    }
  }
  return std::nullopt;
}

Maybe monoidalTransformationLaws(const Instance& I, const MonoidalData& d, Rng& rng,
                                 const Sampler& s) {
  CellChain ca = sampleChain(I, rng, 2, s);
  CellChain cb = sampleChain(I, rng, 2, s);
  CellChain cc = sampleChain(I, rng, 2, s);
  const HCell &m = ca.cells[0], &n = ca.cells[1];
  const HCell &p = cb.cells[0], &q = cb.cells[1];
  const HCell &o = cc.cells[0], &w = cc.cells[1];

  Square am = d.assocCell(m, p, o);
  if (!I.hcellEq(am.src, d.prodCell(d.prodCell(m, p), o)) ||
      !I.hcellEq(am.tgt, d.prodCell(m, d.prodCell(p, o))) ||
      !I.vertEq(am.la, d.assocObj(m.lf, p.lf, o.lf)) ||
      !I.vertEq(am.ra, d.assocObj(m.rf, p.rf, o.rf)))
    return Violation{"associator-cell-frames", json{{"square", I.squareJson(am)}}};
  if (!I.invert(am))
    return Violation{"associator-cell-invertible", json{{"square", I.squareJson(am)}}};

  // pasting with the interchange: the associator commutes with ⊙
  {
    HCell mn = I.hCompose(m, n), pq = I.hCompose(p, q), ow = I.hCompose(o, w);
    Square hl = I.vCompose2(
        I.vCompose2(d.interchange(d.prodCell(m, p), o, d.prodCell(n, q), w),
                    d.prodSquare(d.interchange(m, p, n, q), I.sqId(ow))),
        d.assocCell(mn, pq, ow));
    Square hr = I.vCompose2(
        I.vCompose2(I.hCompose2(d.assocCell(m, p, o), d.assocCell(n, q, w)),
                    d.interchange(m, d.prodCell(p, o), n, d.prodCell(q, w))),
        d.prodSquare(I.sqId(mn), d.interchange(p, o, q, w)));
    if (auto v = eqLaw(I, hl, hr, "associator-cell-pasting")) return v;

    // unit pasting: U at a triple of objects
    const Obj &a = ca.objs[0], &b = cb.objs[0], &c = cc.objs[0];
    Square ul = I.vCompose2(
        I.vCompose2(d.unitIso(d.prodObj(a, b), c),
                    d.prodSquare(d.unitIso(a, b), I.sqId(I.hUnit(c)))),
        d.assocCell(I.hUnit(a), I.hUnit(b), I.hUnit(c)));
    Square ur = I.vCompose2(
        I.vCompose2(I.sqUnit(d.assocObj(a, b, c)), d.unitIso(a, d.prodObj(b, c))),
        d.prodSquare(I.sqId(I.hUnit(a)), d.unitIso(b, c)));
    if (auto v = eqLaw(I, ul, ur, "associator-unit-pasting")) return v;
  }

  // left/right unitor cells
  {
    Square lm = d.lunitCell(m);
    if (!I.hcellEq(lm.src, d.prodCell(I.hUnit(d.unitObj), m)) || !I.hcellEq(lm.tgt, m) ||
        !I.vertEq(lm.la, d.lunitObj(m.lf)) || !I.vertEq(lm.ra, d.lunitObj(m.rf)))
      return Violation{"left-unitor-cell-frames", json{{"square", I.squareJson(lm)}}};
    if (!I.invert(lm))
      return Violation{"left-unitor-cell-invertible", json{{"square", I.squareJson(lm)}}};
    HCell ui = I.hUnit(d.unitObj);
    Square pl = I.vCompose2(
        I.vCompose2(d.interchange(ui, m, ui, n), d.prodSquare(I.lunit(ui), I.sqId(I.hCompose(m, n)))),
        d.lunitCell(I.hCompose(m, n)));
    Square pr = I.hCompose2(d.lunitCell(m), d.lunitCell(n));
    if (auto v = eqLaw(I, pl, pr, "left-unitor-cell-pasting")) return v;

    Square rm = d.runitCell(m);
    if (!I.hcellEq(rm.src, d.prodCell(m, I.hUnit(d.unitObj))) || !I.hcellEq(rm.tgt, m))
      return Violation{"right-unitor-cell-frames", json{{"square", I.squareJson(rm)}}};
    if (!I.invert(rm))
      return Violation{"right-unitor-cell-invertible", json{{"square", I.squareJson(rm)}}};
    Square ql = I.vCompose2(
        I.vCompose2(d.interchange(m, ui, n, ui), d.prodSquare(I.sqId(I.hCompose(m, n)), I.lunit(ui))),
        d.runitCell(I.hCompose(m, n)));
    Square qr = I.hCompose2(d.runitCell(m), d.runitCell(n));
    if (auto v = eqLaw(I, ql, qr, "right-unitor-cell-pasting")) return v;
  }

  // symmetry cells
  if (d.symObj && d.symCell) {
    Square sm = d.symCell(m, p);
    if (!I.hcellEq(sm.src, d.prodCell(m, p)) || !I.hcellEq(sm.tgt, d.prodCell(p, m)) ||
        !I.vertEq(sm.la, d.symObj(m.lf, p.lf)) || !I.vertEq(sm.ra, d.symObj(m.rf, p.rf)))
      return Violation{"symmetry-cell-frames", json{{"square", I.squareJson(sm)}}};
    if (auto v = eqLaw(I, I.vCompose2(sm, d.symCell(p, m)), I.sqId(d.prodCell(m, p)),
                       "symmetry-cell-involutive"))
      return v;
    Square bl = I.vCompose2(d.interchange(m, p, n, q),
                            d.symCell(I.hCompose(m, n), I.hCompose(p, q)));
    Square br = I.vCompose2(I.hCompose2(d.symCell(m, p), d.symCell(n, q)),
                            d.interchange(p, m, q, n));
    if (auto v = eqLaw(I, bl, br, "braiding-interchange")) return v;
    const Obj &a = ca.objs[0], &b = cb.objs[0];
    Square ul = I.vCompose2(d.unitIso(a, b), d.symCell(I.hUnit(a), I.hUnit(b)));
    Square ur = I.vCompose2(I.sqUnit(d.symObj(a, b)), d.unitIso(b, a));
    if (auto v = eqLaw(I, ul, ur, "braiding-unit")) return v;
  }
  return std::nullopt;
}

}  // namespace

LawReport checkMonoidalFramed(const Instance& I, const MonoidalData& d, const Sampler& s) {
  LawReport rep = runSamples("monoidal " + I.name(), s, [&](Rng& rng) -> Maybe {
    if (auto v = monoidalObjectLaws(I, d, rng, s)) return v;
    if (auto v = monoidalCellLaws(I, d, rng, s)) return v;
    if (auto v = monoidalTransformationLaws(I, d, rng, s)) return v;
    return std::nullopt;
  });
  if (rep.pass && d.symObj && d.symCell) rep.notes.push_back("symmetric");
  return rep;
}

// ---- involutions ---------------------------------------------------------------------

namespace {

Maybe involutionFunctorLaws(const Instance& I, const InvolutionData& d, Rng& rng,
                            const Sampler& s) {
  CellChain ch = sampleChain(I, rng, 3, s);
  const HCell &m = ch.cells[0], &n = ch.cells[1], &p = ch.cells[2];
  const Obj& a = ch.objs[0];

  HCell om = d.opCell(m);
  if (!I.objEq(om.lf, d.opObj(m.rf)) || !I.objEq(om.rf, d.opObj(m.lf)))
    return Violation{"involution-frames", json{{"cell", I.hcellJson(om)}}};

  Obj b0 = I.sampleObj(rng, s.maxObj), b1 = I.sampleObj(rng, s.maxObj),
      b2 = I.sampleObj(rng, s.maxObj);
  auto f = I.sampleVert(rng, b0, b1);
  auto g = I.sampleVert(rng, b1, b2);
  if (f && g) {
    if (auto v = eqVertLaw(I, d.opVert(I.vId(b0)), I.vId(d.opObj(b0)),
                           "involution-vertical-identity"))
      return v;
    if (auto v = eqVertLaw(I, d.opVert(I.vCompose(*f, *g)),
                           I.vCompose(d.opVert(*f), d.opVert(*g)),
                           "involution-vertical-composition"))
      return v;
  }

  if (auto v = eqLaw(I, d.opSquare(I.sqId(m)), I.sqId(om), "involution-identity-square"))
    return v;

  auto grid = sampleGrid(I, rng, 3, 1, s);
  if (grid) {
    const Square &al = grid->squares[0][0], &al2 = grid->squares[1][0];
    if (auto v = eqLaw(I, d.opSquare(I.vCompose2(al, al2)),
                       I.vCompose2(d.opSquare(al), d.opSquare(al2)),
                       "involution-vertical-square-composition"))
      return v;
    Square flip = d.opSquare(al);
    if (!I.vertEq(flip.la, d.opVert(al.ra)) || !I.vertEq(flip.ra, d.opVert(al.la)))
      return Violation{"involution-square-frames", json{{"square", I.squareJson(flip)}}};
  }

  Square cmp = d.compCmp(m, n);
  if (!dbl::globular(I, cmp) || !I.hcellEq(cmp.src, I.hCompose(d.opCell(n), d.opCell(m))) ||
      !I.hcellEq(cmp.tgt, d.opCell(I.hCompose(m, n))))
    return Violation{"involution-comparison-shape", json{{"square", I.squareJson(cmp)}}};
  if (auto v = invertibleLaw(I, cmp, "involution-comparison-invertible")) return v;

  Square ucm = d.unitCmp(a);
  if (!dbl::globular(I, ucm) || !I.hcellEq(ucm.src, I.hUnit(d.opObj(a))) ||
      !I.hcellEq(ucm.tgt, d.opCell(I.hUnit(a))))
    return Violation{"involution-unit-shape", json{{"square", I.squareJson(ucm)}}};
  if (auto v = invertibleLaw(I, ucm, "involution-unit-invertible")) return v;

  // naturality of the comparison
  auto ngrid = sampleGrid(I, rng, 2, 2, s);
  if (ngrid) {
    const Square &al = ngrid->squares[0][0], &be = ngrid->squares[0][1];
    const CellChain &top = ngrid->rows[0], &bot = ngrid->rows[1];
    Square l = I.vCompose2(I.hCompose2(d.opSquare(be), d.opSquare(al)),
                           d.compCmp(bot.cells[0], bot.cells[1]));
    Square r = I.vCompose2(d.compCmp(top.cells[0], top.cells[1]),
                           d.opSquare(I.hCompose2(al, be)));
    if (auto v = eqLaw(I, l, r, "involution-comparison-natural")) return v;
  }

  // coherence with the associator
  {
    HCell op = d.opCell(p), on = d.opCell(n), omm = d.opCell(m);
    Square l = I.vCompose2(I.vCompose2(I.hCompose2(d.compCmp(n, p), I.sqId(omm)),
                                       d.compCmp(m, I.hCompose(n, p))),
                           d.opSquare(I.invert(I.assoc(m, n, p)).value()));
    Square r = I.vCompose2(I.vCompose2(I.assoc(op, on, omm),
                                       I.hCompose2(I.sqId(op), d.compCmp(m, n))),
                           d.compCmp(I.hCompose(m, n), p));
    if (auto v = eqLaw(I, l, r, "involution-coherence-associativity")) return v;
  }

  // coherence with the unitors
  {
    Square l = I.vCompose2(I.vCompose2(I.hCompose2(d.unitCmp(m.rf), I.sqId(om)),
                                       d.compCmp(m, I.hUnit(m.rf))),
                           d.opSquare(I.runit(m)));
    if (auto v = eqLaw(I, l, I.lunit(om), "involution-coherence-left-unit")) return v;
    Square r = I.vCompose2(I.vCompose2(I.hCompose2(I.sqId(om), d.unitCmp(m.lf)),
                                       d.compCmp(I.hUnit(m.lf), m)),
                           d.opSquare(I.lunit(m)));
    if (auto v = eqLaw(I, r, I.runit(om), "involution-coherence-right-unit")) return v;
  }
  return std::nullopt;
}

Maybe involutionXiLaws(const Instance& I, const InvolutionData& d, Rng& rng, const Sampler& s,
                       bool& strict) {
  CellChain ch = sampleChain(I, rng, 2, s);
  const HCell &m = ch.cells[0], &n = ch.cells[1];
  const Obj& a = ch.objs[0];

  Vert xa = d.xiObj(a);
  if (!I.objEq(xa.dom, d.opObj(d.opObj(a))) || !I.objEq(xa.cod, a))
    return Violation{"xi-frames", json{{"component", I.vertJson(xa)}}};
  try {
    vertInverse(I, xa);
  } catch (const InputError&) {
    return Violation{"xi-object-invertible", json{{"component", I.vertJson(xa)}}};
  }
  if (!I.vertEq(xa, I.vId(a))) strict = false;

  Square xm = d.xiCell(m);
  if (!I.hcellEq(xm.src, d.opCell(d.opCell(m))) || !I.hcellEq(xm.tgt, m) ||
      !I.vertEq(xm.la, d.xiObj(m.lf)) || !I.vertEq(xm.ra, d.xiObj(m.rf)))
    return Violation{"xi-cell-frames", json{{"component", I.squareJson(xm)}}};
  if (!I.invert(xm))
    return Violation{"xi-cell-invertible", json{{"component", I.squareJson(xm)}}};
  if (!I.squareEq(xm, I.sqId(m))) strict = false;

  // (ξ_A)ᵒᵖ = ξ_{Aᵒᵖ}
  if (auto v = eqVertLaw(I, d.opVert(d.xiObj(a)), d.xiObj(d.opObj(a)), "xi-self-dual")) return v;

  // naturality against a sampled square
  auto grid = sampleGrid(I, rng, 2, 1, s);
  if (grid) {
    const Square& al = grid->squares[0][0];
    Square l = I.vCompose2(d.opSquare(d.opSquare(al)), d.xiCell(grid->rows[1].cells[0]));
    Square r = I.vCompose2(d.xiCell(grid->rows[0].cells[0]), al);
    if (auto v = eqLaw(I, l, r, "xi-natural")) return v;
  }

  // compatibility with the double-involution comparison squares
  {
    Square op2cmp = I.vCompose2(d.compCmp(d.opCell(n), d.opCell(m)),
                                d.opSquare(d.compCmp(m, n)));
    Square l = I.vCompose2(op2cmp, d.xiCell(I.hCompose(m, n)));
    Square r = I.hCompose2(d.xiCell(m), d.xiCell(n));
    if (auto v = eqLaw(I, l, r, "xi-composition-pasting")) return v;

    Square op2unit = I.vCompose2(d.unitCmp(d.opObj(a)), d.opSquare(d.unitCmp(a)));
    Square ul = I.vCompose2(op2unit, d.xiCell(I.hUnit(a)));
    if (auto v = eqLaw(I, ul, I.sqUnit(d.xiObj(a)), "xi-unit-pasting")) return v;
  }
  return std::nullopt;
}

}  // namespace

FramedFunctor strengthen(const FramedFunctor& f) {
  FramedFunctor g = f;
  g.flavor = Flavor::Strong;
  if (laxOriented(f.flavor)) return g;
  g.compCmp = [f, cod = f.cod](const HCell& m, const HCell& n) {
    return invertOrThrow(*cod, f.compCmp(m, n), "strengthened composition comparison");
  };
  g.unitCmp = [f, cod = f.cod](const Obj& a) {
    return invertOrThrow(*cod, f.unitCmp(a), "strengthened unit comparison");
  };
  return g;
}

LawReport checkInvolution(const Instance& I, const InvolutionData& d, const Sampler& s) {
  bool strict = true;
  LawReport rep = runSamples("involution " + I.name(), s, [&](Rng& rng) -> Maybe {
    if (auto v = involutionFunctorLaws(I, d, rng, s)) return v;
    if (auto v = involutionXiLaws(I, d, rng, s, strict)) return v;
    return std::nullopt;
  });
  if (rep.pass)
    rep.notes.push_back(strict ? "xi components are identities on all samples (strict)"
                               : "non-identity xi components observed (non-strict)");
  return rep;
}

}  // namespace framedkit::laws
