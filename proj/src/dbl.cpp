#include "framedkit/dbl.hpp"

namespace framedkit::dbl {

void Instance::forEachHCell(const Obj&, const Obj&, std::size_t,
                            const std::function<bool(const HCell&)>&) const {
  throw fin::InputError("horizontal cell enumeration is not available for instance '" + name() +
                        "'");
}

bool framesOk(const Instance& inst, const Square& sq) {
  return inst.objEq(sq.la.dom, sq.src.lf) && inst.objEq(sq.la.cod, sq.tgt.lf) &&
         inst.objEq(sq.ra.dom, sq.src.rf) && inst.objEq(sq.ra.cod, sq.tgt.rf);
}

bool globular(const Instance& inst, const Square& sq) {
  return framesOk(inst, sq) && inst.vertEq(sq.la, inst.vId(sq.src.lf)) &&
         inst.vertEq(sq.ra, inst.vId(sq.src.rf));
}

CompanionData companionConjoint(const Instance& inst, const Vert& f) {
  const Obj& a = f.dom;
  const Obj& b = f.cod;
  Vert idA = inst.vId(a), idB = inst.vId(b);
  HCell unitB = inst.hUnit(b);
  Square uf = inst.sqUnit(f);

  Restriction comp = inst.restrictCell(f, unitB, idB);
  auto compFrom = inst.factorCart(comp.cart, uf, idA, f);
  if (!compFrom)
    throw fin::InputError("companionConjoint: unit square failed to factor through the companion");

  Restriction conj = inst.restrictCell(idB, unitB, f);
  auto conjFrom = inst.factorCart(conj.cart, uf, f, idA);
  if (!conjFrom)
    throw fin::InputError("companionConjoint: unit square failed to factor through the conjoint");

  return CompanionData{f,         comp.cell, comp.cart, *compFrom,
                       conj.cell, conj.cart, *conjFrom};
}

std::optional<Square> factorUniversal(const Instance& inst, const CartesianWitness& w,
                                      const Square& candidate, const Vert& u, const Vert& v) {
  if (!w.opcartesian) {
    auto chi = inst.factorCart(w.square, candidate, u, v);
    if (!chi) return std::nullopt;
    if (!inst.squareEq(inst.vCompose2(*chi, w.square), candidate)) return std::nullopt;
    return chi;
  }
  auto chi = inst.factorOpcart(w.square, candidate, u, v);
  if (!chi) return std::nullopt;
  if (!inst.squareEq(inst.vCompose2(w.square, *chi), candidate)) return std::nullopt;
  return chi;
}

std::vector<Square> factorExhaustive(const Instance& inst, const CartesianWitness& w,
                                     const Square& candidate, const Vert& u, const Vert& v) {
  std::vector<Square> found;
  if (!w.opcartesian) {
    inst.forEachSquare(candidate.src, w.square.src, u, v, [&](const Square& chi) {
      if (inst.squareEq(inst.vCompose2(chi, w.square), candidate)) found.push_back(chi);
      return true;
    });
  } else {
    inst.forEachSquare(w.square.tgt, candidate.tgt, u, v, [&](const Square& chi) {
      if (inst.squareEq(inst.vCompose2(w.square, chi), candidate)) found.push_back(chi);
      return true;
    });
  }
  return found;
}

BcoReport bcObjectsRepresent(const Instance& inst, const Vert& f, const HCell& m, const Vert& g) {
  BcoReport rep;
  if (!inst.objEq(f.cod, m.lf) || !inst.objEq(g.cod, m.rf)) {
    rep.detail = "frame mismatch";
    return rep;
  }
  HCell restricted = inst.restrictCell(f, m, g).cell;
  CompanionData cf = companionConjoint(inst, f);
  CompanionData cg = companionConjoint(inst, g);
  HCell viaCells = inst.hCompose(inst.hCompose(cf.companion, m), cg.conjoint);
  auto iso = inst.findGlobularIso(restricted, viaCells);
  if (!iso) {
    rep.detail = "no constrained bijection between the restriction and the three-fold composite";
    return rep;
  }
  rep.pass = true;
  rep.iso = iso;
  return rep;
}

// ---- pasting planner ----------------------------------------------------

HTree HTree::leaf(HCell m) {
  HTree t;
  t.kind_ = Kind::Leaf;
  t.cell_ = std::move(m);
  return t;
}

HTree HTree::unit(Obj a) {
  HTree t;
  t.kind_ = Kind::Unit;
  t.obj_ = std::move(a);
  return t;
}

HTree HTree::node(HTree l, HTree r) {
  HTree t;
  t.kind_ = Kind::Node;
  t.l_ = std::make_shared<HTree>(std::move(l));
  t.r_ = std::make_shared<HTree>(std::move(r));
  return t;
}

HCell evalTree(const Instance& inst, const HTree& t) {
  if (t.isLeaf()) return t.cell();
  if (t.isUnit()) return inst.hUnit(t.unitObj());
  return inst.hCompose(evalTree(inst, t.left()), evalTree(inst, t.right()));
}

std::vector<HCell> flattenTree(const HTree& t) {
  if (t.isLeaf()) return {t.cell()};
  if (t.isUnit()) return {};
  auto l = flattenTree(t.left());
  auto r = flattenTree(t.right());
  l.insert(l.end(), r.begin(), r.end());
  return l;
}

namespace {

struct NormResult {
  Square sq;  // evalTree(t) ⇒ comb(cells)
  std::vector<HCell> cells;
};

HCell comb(const Instance& inst, const std::vector<HCell>& cells, std::size_t from, const Obj& at) {
  if (from == cells.size()) return inst.hUnit(at);
  if (from + 1 == cells.size()) return cells[from];
  return inst.hCompose(cells[from], comb(inst, cells, from + 1, at));
}

// xEval⊙yEval ⇒ comb(LX ++ LY); xEval = comb(LX), yEval = comb(LY)
Square merge(const Instance& inst, const std::vector<HCell>& lx, std::size_t from,
             const HCell& xEval, const std::vector<HCell>& ly, const HCell& yEval) {
  if (from == lx.size()) return inst.lunit(yEval);
  if (ly.empty()) return inst.runit(xEval);
  if (from + 1 == lx.size()) return inst.sqId(inst.hCompose(xEval, yEval));
  const HCell& head = lx[from];
  HCell restEval = comb(inst, lx, from + 1, xEval.rf);
  Square a = inst.assoc(head, restEval, yEval);
  Square tail = merge(inst, lx, from + 1, restEval, ly, yEval);
  return inst.vCompose2(a, inst.hCompose2(inst.sqId(head), tail));
}

NormResult normalize(const Instance& inst, const HTree& t) {
  if (t.isLeaf()) return NormResult{inst.sqId(t.cell()), {t.cell()}};
  if (t.isUnit()) return NormResult{inst.sqId(inst.hUnit(t.unitObj())), {}};
  NormResult nx = normalize(inst, t.left());
  NormResult ny = normalize(inst, t.right());
  Square side = inst.hCompose2(nx.sq, ny.sq);
  Square m = merge(inst, nx.cells, 0, nx.sq.tgt, ny.cells, ny.sq.tgt);
  NormResult out{inst.vCompose2(side, m), nx.cells};
  out.cells.insert(out.cells.end(), ny.cells.begin(), ny.cells.end());
  return out;
}

}  // namespace

Square cohere(const Instance& inst, const HTree& from, const HTree& to) {
  NormResult nf = normalize(inst, from);
  NormResult nt = normalize(inst, to);
  if (nf.cells.size() != nt.cells.size())
    throw fin::InputError("cohere: cell lists differ in length");
  for (std::size_t i = 0; i < nf.cells.size(); ++i)
    if (!inst.hcellEq(nf.cells[i], nt.cells[i]))
      throw fin::InputError("cohere: cell lists differ");
  auto inv = inst.invert(nt.sq);
  if (!inv) throw fin::InputError("cohere: normalization square is not invertible");
  return inst.vCompose2(nf.sq, *inv);
}

}  // namespace framedkit::dbl
