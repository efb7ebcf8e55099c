#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "farey/partition.hpp"

namespace farey {

/// Letters over {0,1}. F_{alpha,w} = F_{w_1} o ... o F_{w_k}, so the last
/// letter acts first.
using BranchWord = std::vector<std::uint8_t>;

BranchWord parse_word(const std::string& letters);
std::string to_string(const BranchWord& word);
/// 0_k
BranchWord zeros(Index k);
/// 1 0_{n-1}
BranchWord one_zeros(Index n);

/// F_alpha(x) on [0,1].
double farey_apply(const TailSequence& seq, double x);

/// Inverse branch F_{alpha,b}; b = 0 maps [0,1] onto [0,t_2], b = 1 onto [t_2,1].
double branch_apply(const TailSequence& seq, std::uint8_t letter, double x);
double word_apply(const TailSequence& seq, const BranchWord& word, double x);

/// c_{n,w}: the weight of F_{alpha,w} on A_n in the k-fold transfer operator.
/// Words longer than 64 letters are rejected.
double c_const(const TailSequence& seq, Index n, const BranchWord& word);

/// Memoised c_{n,w}; cache insertion is idempotent.
class WordConstants {
 public:
  explicit WordConstants(TailSequence seq) : seq_(std::move(seq)) {}
  double operator()(Index n, const BranchWord& word) const;
  std::size_t cached() const;

 private:
  TailSequence seq_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, double> cache_;
};

/// {phi = n}: [1 - a_1 t_1, 1 - a_1 t_2] for n = 1, (1 - a_1 t_n, 1 - a_1 t_{n+1}] otherwise.
struct ReturnCylinder {
  Index n = 1;
  double left = 0.0;
  double right = 0.0;
  bool left_closed = false;

  double length() const { return right - left; }
};

ReturnCylinder return_cylinder(const TailSequence& seq, Index n);

/// First return time to [t_2, 1], from the cylinder formula. phi(1) := 1.
Index return_time(const TailSequence& seq, double x);

/// G_alpha(x) = F^{phi(x)}(x), G(1) := t_2.
double induced_apply(const TailSequence& seq, double x);

}  // namespace farey
