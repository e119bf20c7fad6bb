#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ralg/signature.hpp"

namespace ralg {

/// An orderly term: a leaf (identity on one variable of the given sort) or an
/// operation applied to orderly terms. Variables are assigned to leaves left
/// to right. Immutable and cheap to copy.
class OrderlyTerm {
 public:
  static OrderlyTerm leaf(SortIndex sort);
  /// Throws PreconditionError if the child count or child output sorts do not
  /// match the operation.
  static OrderlyTerm node(const Signature& sig, std::size_t op, std::vector<OrderlyTerm> children);

  bool is_leaf() const { return rep_->leaf; }
  /// Operation index of a node. Meaningless for leaves.
  std::size_t op() const { return rep_->op; }
  SortIndex output() const { return rep_->output; }
  const std::vector<SortIndex>& inputs() const { return rep_->inputs; }
  const std::vector<OrderlyTerm>& children() const { return rep_->children; }
  std::size_t arity() const { return rep_->inputs.size(); }
  std::size_t size() const { return rep_->size; }

  /// Structural order: leaves before nodes, leaves by sort, nodes by op index
  /// and then children.
  friend std::strong_ordering structural_compare(const OrderlyTerm& a, const OrderlyTerm& b);
  /// Enumeration order: size, then arity, then structure.
  friend std::strong_ordering operator<=>(const OrderlyTerm& a, const OrderlyTerm& b);
  friend bool operator==(const OrderlyTerm& a, const OrderlyTerm& b);

 private:
  struct Rep {
    bool leaf = true;
    std::size_t op = 0;
    SortIndex output;
    std::vector<SortIndex> inputs;
    std::vector<OrderlyTerm> children;
    std::size_t size = 0;
  };
  explicit OrderlyTerm(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  std::shared_ptr<const Rep> rep_;
};

struct TermSignatureInfo {
  std::vector<SortIndex> input_sorts;
  SortIndex output_sort;
  std::size_t size = 0;
};

TermSignatureInfo term_info(const OrderlyTerm& t);

/// All orderly terms with the given output sort, arity <= max_arity and
/// size <= max_size, in enumeration order, without structural duplicates.
std::vector<OrderlyTerm> enumerate_terms(const Signature& sig, SortIndex output, std::size_t max_arity,
                                         std::size_t max_size);

/// Terms for every output sort, enumerated once and shared.
class TermCatalog {
 public:
  TermCatalog(const Signature& sig, std::size_t max_arity, std::size_t max_size);

  const std::vector<OrderlyTerm>& terms(SortIndex output) const { return by_sort_.at(output.id); }
  std::size_t max_arity() const { return max_arity_; }
  std::size_t max_size() const { return max_size_; }

 private:
  std::vector<std::vector<OrderlyTerm>> by_sort_;
  std::size_t max_arity_;
  std::size_t max_size_;
};

/// Throws PreconditionError on arity or sort mismatch.
Value evaluate(const Signature& sig, const OrderlyTerm& t, std::span<const Value> args);
/// Evaluation without argument checks, for inner loops over pre-validated tuples.
Value evaluate_unchecked(const Signature& sig, const OrderlyTerm& t, std::span<const Value> args);

/// Replace the leaves of t, left to right, by the given terms. Each
/// replacement's output sort must equal the sort of the leaf it replaces.
OrderlyTerm substitute(const Signature& sig, const OrderlyTerm& t, const std::vector<OrderlyTerm>& replacements);

/// Keep the first term of each class of extensionally equal terms, judged on
/// every tuple of finite phyla (up to sample_limit tuples) and on seeded
/// random samples otherwise.
std::vector<OrderlyTerm> dedup_semantic(const Signature& sig, const std::vector<OrderlyTerm>& terms,
                                        std::size_t sample_limit = 4096, unsigned seed = 1);

/// Prefix notation, e.g. (+V (. (idF _) (idV _)) (idV _)).
std::string to_string(const Signature& sig, const OrderlyTerm& t);
/// Inverse of to_string. Throws PreconditionError with the offending offset.
OrderlyTerm parse_term(const Signature& sig, std::string_view text);

}  // namespace ralg
