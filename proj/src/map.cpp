#include "farey/map.hpp"

namespace farey {

namespace {

constexpr std::size_t kMaxWord = 64;

void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + ": x must lie in [0,1]");
}

// Atom index of y in (0,1], with y = 1 counted in the closed first atom.
Index atom_of(const TailSequence& seq, double y) { return y >= 1.0 ? 1 : seq.locate(y); }

void require_word(const BranchWord& word) {
  if (word.empty()) throw DomainError("c_const: the empty word has no constant");
  if (word.size() > kMaxWord) throw DomainError("c_const: words longer than 64 letters are not supported");
  for (auto b : word) {
    if (b > 1) throw DomainError("branch words use the letters 0 and 1");
  }
}

}  // namespace

BranchWord parse_word(const std::string& letters) {
  BranchWord word;
  word.reserve(letters.size());
  for (char c : letters) {
    if (c != '0' && c != '1') throw DomainError("branch words use the letters 0 and 1");
    word.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return word;
}

std::string to_string(const BranchWord& word) {
  std::string s;
  s.reserve(word.size());
  for (auto b : word) s.push_back(static_cast<char>('0' + b));
  return s;
}

BranchWord zeros(Index k) { return BranchWord(static_cast<std::size_t>(k), 0); }

BranchWord one_zeros(Index n) {
  BranchWord word(static_cast<std::size_t>(n), 0);
  word.front() = 1;
  return word;
}

double farey_apply(const TailSequence& seq, double x) {
  require_unit(x, "farey_apply");
  if (x == 0.0) return 0.0;
  const double a1 = seq.atom_length(1);
  if (x >= seq.tail(2)) return (1.0 - x) / a1;
  const Index n = seq.locate(x);
  return seq.atom_length(n - 1) * (x - seq.tail(n + 1)) / seq.atom_length(n) + seq.tail(n);
}

double branch_apply(const TailSequence& seq, std::uint8_t letter, double x) {
  require_unit(x, "branch_apply");
  if (letter == 1) return 1.0 - seq.atom_length(1) * x;
  if (letter != 0) throw DomainError("branch words use the letters 0 and 1");
  if (x == 0.0) return 0.0;
  const Index m = atom_of(seq, x);
  // A_m -> A_{m+1}, with F_0(1) = t_2 at the closed end.
  return seq.tail(m + 2) + (x - seq.tail(m + 1)) * seq.atom_length(m + 1) / seq.atom_length(m);
}

double word_apply(const TailSequence& seq, const BranchWord& word, double x) {
  for (auto it = word.rbegin(); it != word.rend(); ++it) x = branch_apply(seq, *it, x);
  return x;
}

double c_const(const TailSequence& seq, Index n, const BranchWord& word) {
  if (n < 1) throw DomainError("c_const: index must be >= 1");
  require_word(word);
  // c_{n,(w,0)} = c_{n,(0)} c_{n+1,w} and c_{n,(w,1)} = c_{n,(1)} c_{1,w}: peel letters
  // from the right while tracking the atom the branch lands in.
  double c = 1.0;
  Index m = n;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it == 0) {
      c *= seq.tail_ratio(m);
      ++m;
    } else {
      c *= seq.hazard(m);
      m = 1;
    }
  }
  return c;
}

double WordConstants::operator()(Index n, const BranchWord& word) const {
  require_word(word);
  std::string key = std::to_string(n) + ':' + to_string(word);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double c = c_const(seq_, n, word);
  std::lock_guard lock(mutex_);
  cache_.emplace(std::move(key), c);
  return c;
}

std::size_t WordConstants::cached() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

ReturnCylinder return_cylinder(const TailSequence& seq, Index n) {
  if (n < 1) throw DomainError("return_cylinder: index must be >= 1");
  const double a1 = seq.atom_length(1);
  return ReturnCylinder{n, 1.0 - a1 * seq.tail(n), 1.0 - a1 * seq.tail(n + 1), n == 1};
}

Index return_time(const TailSequence& seq, double x) {
  const double t2 = seq.tail(2);
  if (!(x >= t2 && x <= 1.0)) throw DomainError("return_time: x must lie in [t_2, 1]");
  if (x == 1.0) return 1;
  // F(x) = (1-x)/a_1 lies in A_n exactly when x is in {phi = n}.
  const double y = (1.0 - x) / seq.atom_length(1);
  if (y >= t2) return 1;
  return seq.locate(y);
}

double induced_apply(const TailSequence& seq, double x) {
  const double t2 = seq.tail(2);
  if (x == 1.0) return t2;
  const Index n = return_time(seq, x);
  const double a1 = seq.atom_length(1);
  const double y = (1.0 - x) / a1;
  if (n == 1) return y;
  // F^{n-1} maps A_n affinely onto A_1.
  return t2 + (y - seq.tail(n + 1)) * a1 / seq.atom_length(n);
}

}  // namespace farey
