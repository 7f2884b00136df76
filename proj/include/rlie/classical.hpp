#pragma once

// Classical simple Lie algebras as matrix algebras over F_p with the p-th
// matrix power as p-map.

#include <string>

#include "rlie/restricted.hpp"

namespace rlie {

enum class ClassicalFamily { sl, psl, so, sp };

ClassicalFamily parse_classical_family(const std::string& name);
std::string to_string(ClassicalFamily f);

/// `size` is the matrix size: sl(N), psl(N), so(N), sp(N).
struct ClassicalSpec {
  ClassicalFamily family = ClassicalFamily::sl;
  std::size_t size = 2;
  std::uint32_t p = 5;
};

/// Accepted sizes: sl and psl N >= 2, so N = 5, 7, ... or N >= 8, sp even
/// N >= 4. Characteristics 2 and 3 are rejected. psl(N) is sl(N) modulo its
/// center (the scalar matrices when p divides N).
RestrictedLieAlgebra construct_classical(const ClassicalSpec& spec);

/// The Gram matrix of the form preserved by so(N) (antidiagonal ones) or
/// sp(N) (antidiagonal, +1 above the middle and -1 below).
DenseMatrix classical_form(const PrimeField& F, ClassicalFamily family, std::size_t size);

}  // namespace rlie
