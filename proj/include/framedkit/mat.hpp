#pragma once

#include "framedkit/dbl.hpp"

namespace framedkit::mat {

using fin::FinFn;
using fin::FinSet;

// A set-valued matrix: one finite set per (row, column) position.
struct MatCell {
  FinSet rows, cols;
  std::vector<FinSet> entries;  // row-major, rows.size()*cols.size()

  const FinSet& at(std::size_t i, std::size_t j) const { return entries[i * cols.size() + j]; }
  FinSet& at(std::size_t i, std::size_t j) { return entries[i * cols.size() + j]; }

  friend bool operator==(const MatCell& a, const MatCell& b) {
    return a.rows == b.rows && a.cols == b.cols && a.entries == b.entries;
  }
};

MatCell makeMat(FinSet rows, FinSet cols, std::vector<FinSet> entries);
MatCell matUnit(const FinSet& a);
MatCell matCompose(const MatCell& m, const MatCell& n);
MatCell matTranspose(const MatCell& m);
MatCell matExternalTensor(const MatCell& m, const MatCell& n);
dbl::Restriction matRestrict(const FinFn& f, const MatCell& m, const FinFn& g);
dbl::Extension matExtend(const FinFn& f, const MatCell& m, const FinFn& g);

// disjoint-union labels "inl_<index>(<inner>)"; the index set resolves the tag
std::string sumLabel(const std::string& index, const std::string& inner);
std::optional<std::pair<std::size_t, std::string>> splitSum(const std::string& label,
                                                            const FinSet& indices);

const dbl::Instance& matInstance();

dbl::Obj wrapObj(FinSet a);
dbl::Vert wrapVert(FinFn f);
dbl::HCell wrapCell(MatCell m);
// maps: row-major over src entries, maps[i][j]: src(i,j) → tgt(f(i),g(j))
dbl::Square wrapSquare(MatCell src, MatCell tgt, FinFn f, FinFn g, std::vector<FinFn> maps);
const MatCell& cellOf(const dbl::HCell&);
const std::vector<FinFn>& mapsOf(const dbl::Square&);
const FinSet& objOf(const dbl::Obj&);
const FinFn& vertOf(const dbl::Vert&);

}  // namespace framedkit::mat
