#pragma once

// Free-group words over an indexed alphabet.
//
// A word over an alphabet of `rank` generators is a sequence of letters
// x_i^{+1} or x_i^{-1}. Every Word value is freely reduced; raw letter
// sequences go through reduce() first.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pql {

struct Letter {
  int generator = 0;
  int sign = 1;  // +1 or -1

  constexpr Letter inverse() const noexcept { return {generator, -sign}; }
  constexpr bool cancels(const Letter& other) const noexcept {
    return generator == other.generator && sign == -other.sign;
  }
  friend constexpr bool operator==(const Letter&, const Letter&) = default;
};

class Word {
 public:
  Word() = default;
  explicit Word(int rank) : rank_(rank) {
    if (rank < 0) throw std::invalid_argument("Word: negative alphabet rank");
  }

  int rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  std::span<const Letter> letters() const noexcept { return letters_; }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  friend bool operator==(const Word&, const Word&) = default;

 private:
  friend Word reduce(int rank, std::span<const Letter> raw);
  int rank_ = 0;
  std::vector<Letter> letters_;
};

inline void check_same_alphabet(const Word& lhs, const Word& rhs) {
  if (lhs.rank() != rhs.rank()) {
    throw std::invalid_argument("word alphabet mismatch: rank " + std::to_string(lhs.rank()) +
                                " vs " + std::to_string(rhs.rank()));
  }
}

/// Free reduction by a single stack scan.
inline Word reduce(int rank, std::span<const Letter> raw) {
  Word out(rank);
  out.letters_.reserve(raw.size());
  for (const Letter& l : raw) {
    if (l.generator < 0 || l.generator >= rank || (l.sign != 1 && l.sign != -1)) {
      throw std::out_of_range("letter outside alphabet of rank " + std::to_string(rank));
    }
    if (!out.letters_.empty() && out.letters_.back().cancels(l)) {
      out.letters_.pop_back();
    } else {
      out.letters_.push_back(l);
    }
  }
  return out;
}

inline Word reduce(int rank, std::initializer_list<Letter> raw) {
  return reduce(rank, std::span<const Letter>(raw.begin(), raw.size()));
}

inline Word generator_word(int rank, int generator, int sign = 1) {
  return reduce(rank, {Letter{generator, sign}});
}

inline Word multiply(const Word& lhs, const Word& rhs) {
  check_same_alphabet(lhs, rhs);
  std::vector<Letter> raw(lhs.letters().begin(), lhs.letters().end());
  raw.insert(raw.end(), rhs.letters().begin(), rhs.letters().end());
  return reduce(lhs.rank(), raw);
}

inline Word operator*(const Word& lhs, const Word& rhs) { return multiply(lhs, rhs); }

inline Word invert(const Word& w) {
  std::vector<Letter> raw;
  raw.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) raw.push_back(it->inverse());
  return reduce(w.rank(), raw);
}

/// w^k for any integer k; w^0 is the empty word.
inline Word power(const Word& w, long k) {
  Word base = k < 0 ? invert(w) : w;
  Word acc(w.rank());
  for (long i = 0; i < (k < 0 ? -k : k); ++i) acc = multiply(acc, base);
  return acc;
}

inline Word commutator(const Word& x, const Word& y) {
  check_same_alphabet(x, y);
  return x * y * invert(x) * invert(y);
}

inline Word conjugate(const Word& g, const Word& w) { return g * w * invert(g); }

/// Strips matching first/last letters; the result is cyclically reduced.
inline Word cyclic_reduce(const Word& w) {
  auto letters = w.letters();
  std::size_t lo = 0;
  std::size_t hi = letters.size();
  while (hi - lo >= 2 && letters[lo].cancels(letters[hi - 1])) {
    ++lo;
    --hi;
  }
  return reduce(w.rank(), letters.subspan(lo, hi - lo));
}

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || !w[0].cancels(w[w.size() - 1]);
}

/// Conjugacy in the free group: cyclic reductions are rotations of one another.
inline bool conjugacy_equal(const Word& w1, const Word& w2) {
  check_same_alphabet(w1, w2);
  const Word u = cyclic_reduce(w1);
  const Word v = cyclic_reduce(w2);
  if (u.size() != v.size()) return false;
  const std::size_t len = u.size();
  if (len == 0) return true;
  for (std::size_t shift = 0; shift < len; ++shift) {
    bool match = true;
    for (std::size_t i = 0; i < len && match; ++i) match = u[(i + shift) % len] == v[i];
    if (match) return true;
  }
  return false;
}

// Naming: surface alphabets print as a1 b1 a2 b2 ...; the rank-2 free group as a b.
// Capital letters denote inverses.
enum class Naming { Surface, FreePair };

inline std::string letter_name(const Letter& l, Naming naming) {
  const char base = (l.generator % 2 == 0) ? 'a' : 'b';
  std::string s(1, l.sign > 0 ? base : static_cast<char>(std::toupper(base)));
  if (naming == Naming::Surface) s += std::to_string(l.generator / 2 + 1);
  return s;
}

inline std::string to_string(const Word& w, Naming naming = Naming::Surface) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += letter_name(w[i], naming);
  }
  return out;
}

inline Letter parse_letter(std::string_view tok, int rank, Naming naming) {
  if (tok.empty()) throw std::invalid_argument("empty letter token");
  const char c = tok.front();
  const char lower = static_cast<char>(std::tolower(c));
  if (lower != 'a' && lower != 'b') throw std::invalid_argument("bad letter: " + std::string(tok));
  int pair = 0;
  if (naming == Naming::Surface) {
    const std::string digits(tok.substr(1));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad letter: " + std::string(tok));
    }
    pair = std::stoi(digits) - 1;
  } else if (tok.size() != 1) {
    throw std::invalid_argument("bad letter: " + std::string(tok));
  }
  const int gen = 2 * pair + (lower == 'b' ? 1 : 0);
  if (pair < 0 || gen >= rank) throw std::out_of_range("letter outside alphabet: " + std::string(tok));
  return {gen, std::isupper(static_cast<unsigned char>(c)) ? -1 : 1};
}

/// Parses whitespace-separated letters, e.g. "a1 b1 A1 B1"; the result is reduced.
inline Word parse_word(std::string_view text, int rank, Naming naming = Naming::Surface) {
  std::vector<Letter> raw;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) raw.push_back(parse_letter(tok, rank, naming));
  return reduce(rank, raw);
}

}  // namespace pql
