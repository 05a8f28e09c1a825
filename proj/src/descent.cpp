#include "repstab/descent.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace repstab {

namespace {

std::vector<ReducedWord> neighbors(const ReducedWord& v) {
  std::vector<ReducedWord> out;
  out.reserve(2 * v.rank);
  for (int i = 1; i <= v.rank; ++i) {
    out.push_back(concat(v, single_letter(i, v.rank)));
    out.push_back(concat(v, single_letter(-i, v.rank)));
  }
  return out;
}

}  // namespace

TreeMinimum minimize_convex_on_tree(const std::function<std::int64_t(const ReducedWord&)>& f,
                                    const ReducedWord& start, std::size_t plateau_cap) {
  ReducedWord current = start;
  std::int64_t fc = f(current);

  for (;;) {
    // Strict descent as long as a better neighbor exists.
    bool moved = true;
    while (moved) {
      moved = false;
      for (ReducedWord& n : neighbors(current)) {
        std::int64_t fn = f(n);
        if (fn < fc) {
          current = std::move(n);
          fc = fn;
          moved = true;
          break;
        }
      }
    }

    // Walk the level set {f == fc} (connected, since sublevel sets of a
    // convex function on a tree are subtrees) looking for an exit.
    std::unordered_set<ReducedWord, WordHash> plateau;
    std::deque<ReducedWord> queue;
    plateau.insert(current);
    queue.push_back(current);
    bool escaped = false;
    while (!queue.empty() && !escaped) {
      ReducedWord v = std::move(queue.front());
      queue.pop_front();
      for (ReducedWord& n : neighbors(v)) {
        if (plateau.contains(n)) continue;
        std::int64_t fn = f(n);
        if (fn < fc) {
          current = std::move(n);
          fc = fn;
          escaped = true;
          break;
        }
        if (fn == fc) {
          if (plateau.size() >= plateau_cap)
            throw CapExceeded("plateau cap exceeded in tree descent");
          plateau.insert(n);
          queue.push_back(n);
        }
      }
    }
    if (escaped) continue;

    // Plateau exhausted with no exit: fc is the global minimum and the
    // plateau is the whole minimizing set.
    TreeMinimum out;
    out.value = fc;
    out.minimizers.assign(plateau.begin(), plateau.end());
    std::sort(out.minimizers.begin(), out.minimizers.end(), word_less);
    return out;
  }
}

}  // namespace repstab
