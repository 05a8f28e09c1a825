#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "repstab/halfint.hpp"

namespace repstab {

// Signed generator index: +i is the i-th generator (1-based), -i its inverse.
// Letter 0 is never a valid letter.
using Letter = int;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Global enumeration guard; REPSTAB_CAP overrides the default at startup.
std::size_t global_cap();
void set_global_cap(std::size_t cap);

// Enumeration order used throughout: a < a^-1 < b < b^-1 < ...
inline int letter_rank(Letter l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

// A freely reduced word in F_k. The empty letter sequence is the identity.
struct ReducedWord {
  std::vector<Letter> letters;
  int rank = 2;

  std::size_t length() const { return letters.size(); }
  bool is_identity() const { return letters.empty(); }

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.rank == b.rank && a.letters == b.letters;
  }
  friend bool operator!=(const ReducedWord& a, const ReducedWord& b) { return !(a == b); }
};

// Length-lexicographic order (letter_rank within equal lengths).
bool word_less(const ReducedWord& a, const ReducedWord& b);

ReducedWord identity_word(int rank);
ReducedWord single_letter(Letter l, int rank);

// Free reduction of a raw letter sequence. Throws std::invalid_argument on a
// letter outside [1..rank] in absolute value.
ReducedWord reduce(const std::vector<Letter>& raw, int rank);

ReducedWord inverse(const ReducedWord& w);
ReducedWord concat(const ReducedWord& u, const ReducedWord& v);
ReducedWord power(const ReducedWord& w, long long n);
// g w g^-1, reduced.
ReducedWord conjugate(const ReducedWord& g, const ReducedWord& w);

// d_S(x, y) = |x^-1 y|.
std::int64_t word_distance(const ReducedWord& x, const ReducedWord& y);

struct CyclicWord {
  ReducedWord core;        // cyclically reduced; |core| = l_S(original)
  ReducedWord conjugator;  // original = conjugator * core * conjugator^-1
};

CyclicWord cyclic_reduce(const ReducedWord& w);
std::int64_t conjugacy_length(const ReducedWord& w);  // l_S

// Conjugacy-class key: least cyclic rotation of the cyclic core.
ReducedWord conjugacy_key(const ReducedWord& w);

// <x,y>_w = (d(x,w) + d(y,w) - d(x,y)) / 2. In the Cayley tree this is the
// distance from w to the geodesic [x,y].
HalfInt gromov_product(const ReducedWord& x, const ReducedWord& y, const ReducedWord& w);

// Vertex path from x to y through the longest-common-prefix meeting point.
std::vector<ReducedWord> geodesic(const ReducedWord& x, const ReducedWord& y);

// All reduced words of length <= radius, length-lexicographic, duplicate
// free. Throws CapExceeded when the count would exceed cap.
std::vector<ReducedWord> enumerate_ball(int rank, int radius, std::size_t cap = global_cap());
std::uint64_t ball_size(int rank, int radius);

// Word literal syntax: "a".."z" generators, "A".."Z" inverses, e.g. "abAB".
// Throws std::invalid_argument with the offending position for bad input.
ReducedWord parse_word(std::string_view text, int rank);
std::string format_word(const ReducedWord& w);

struct WordHash {
  std::size_t operator()(const ReducedWord& w) const {
    std::size_t h = std::hash<int>()(w.rank);
    for (Letter l : w.letters) h = h * 1000003u + static_cast<std::size_t>(l + 64);
    return h;
  }
};

}  // namespace repstab
