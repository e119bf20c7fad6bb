#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ralg/signature.hpp"

namespace ralg {

/// A finite carrier with unary total maps; ops[k][i] is the carrier index of
/// the image of carrier[i] under op k.
struct UnaryAlgebra {
  std::vector<Value> carrier;
  std::vector<std::vector<std::size_t>> ops;
};

std::vector<std::string> validate_unary(const UnaryAlgebra& alg);

/// The unary operations of sig that map phylum s into itself, as a UnaryAlgebra.
UnaryAlgebra unary_algebra_from_signature(const Signature& sig, SortIndex s);

/// Indices of the elements fixed by every op.
std::vector<std::size_t> fixed_point_indices(const UnaryAlgebra& alg);
std::vector<Value> fixed_point_set(const UnaryAlgebra& alg);

struct UnaryClassification {
  bool is_ramsey = true;
  std::vector<Value> fixed;
  /// Elements from which no composition of ops reaches a common fixed point.
  std::vector<Value> unreachable;
};

UnaryClassification unary_ramsey_classification(const UnaryAlgebra& alg);

struct ThreePartition {
  std::array<std::vector<std::size_t>, 3> parts;
  /// cell[x] is the part holding x.
  std::vector<std::uint8_t> cell;
};

/// Partition of {0..n-1} into three parts none of which T maps into itself.
/// T must have no fixed point; throws PreconditionError naming one otherwise.
ThreePartition katetov_partition(const std::vector<std::size_t>& T);

/// True when p partitions {0..|T|-1} and T[P_i] meets P_i for no i.
bool verify_three_partition(const std::vector<std::size_t>& T, const ThreePartition& p);

/// A uniformly random map on {0..n-1} without fixed points (n >= 2).
std::vector<std::size_t> random_fixed_point_free_map(std::size_t n, std::uint64_t seed);

/// The Q-partition of the carrier: every a outside S lying in Q_i has some op
/// f with f(a) outside Q_i. a0 is the image of the auxiliary point.
ThreePartition premprop_partition(const UnaryAlgebra& alg, const std::vector<std::size_t>& S, std::size_t a0);

/// The literal guarantee: for each a outside S in Q_i some op sends a out of Q_i.
bool verify_premprop_guarantee(const UnaryAlgebra& alg, const std::vector<std::size_t>& S, const ThreePartition& q);

}  // namespace ralg
