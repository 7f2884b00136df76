#pragma once

#include <map>

#include "rlie/cohomology.hpp"

namespace rlie::detail {

/// Weight bookkeeping shared by the block solvers: basis vectors are grouped
/// into weight classes, and cochain weights are computed from class weights.
struct WeightContext {
  const LieAlgebra& L;
  const PrimeField& F;
  std::size_t n;
  std::uint32_t p;
  Grading G;
  std::vector<std::size_t> cls;           // class of each basis vector
  std::vector<Weight> class_weight;
  std::map<Weight, std::size_t> class_of;
  std::vector<std::vector<std::size_t>> members;  // basis indices per class, increasing
  std::vector<std::size_t> local;         // position of a basis vector inside its class

  WeightContext(const LieAlgebra& L, Grading G);
  /// Class of a weight, or npos when no basis vector has it.
  std::size_t find(const Weight& w) const;
  Weight w(std::size_t i) const { return class_weight[cls[i]]; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct BlockInput {
  const WeightContext* ctx;
  const std::vector<SparseVec>* pmap;  // null for ordinary cohomology
  const std::vector<std::size_t>* S;   // generating set
  std::size_t center_dim = 0;          // dim of the center in this block's weight
  Weight c;
  bool generators = false;
};

struct BlockOutput {
  BlockStat stat;
  std::vector<RestrictedDeformation> generators;
};

BlockOutput solve_block_parametrized(const BlockInput& in);
/// Same block from the differentials and the restricted condition written
/// out row by row; no generators.
BlockOutput solve_block_full(const BlockInput& in);

}  // namespace rlie::detail
