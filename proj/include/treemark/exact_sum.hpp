#pragma once

#include <vector>

namespace treemark {

/// Error-free accumulation of doubles (Shewchuk expansion arithmetic). The
/// running sum is held exactly as a list of non-overlapping components, so
/// value() is the correctly rounded true sum regardless of the order in which
/// terms were added. Used where summation must be invariant under pixel
/// permutations (e.g. rotated rasters).
class ExactSum {
 public:
  ExactSum() { parts_.reserve(8); }

  void add(double x) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      const double b = parts_[i];
      const double hi = x + b;
      const double bv = hi - x;
      const double av = hi - bv;
      const double err = (b - bv) + (x - av);
      if (err != 0.0) parts_[out++] = err;
      x = hi;
    }
    parts_.resize(out);
    parts_.push_back(x);
  }

  /// Correctly rounded value of the exact sum. Two compression passes leave
  /// the leading component within half an ulp of the represented value, which
  /// makes the result independent of insertion order.
  double value() const {
    if (parts_.empty()) return 0.0;
    const int m = static_cast<int>(parts_.size());
    std::vector<double> g(static_cast<std::size_t>(m));
    int bottom = m - 1;
    double q = parts_[static_cast<std::size_t>(m - 1)];
    for (int i = m - 2; i >= 0; --i) {
      const double e = parts_[static_cast<std::size_t>(i)];
      const double hi = q + e;
      const double err = e - (hi - q);  // fast-two-sum: |q| >= |e|
      if (err != 0.0) {
        g[static_cast<std::size_t>(bottom--)] = hi;
        q = err;
      } else {
        q = hi;
      }
    }
    double result = q;
    for (int i = bottom + 1; i < m; ++i) {
      const double gi = g[static_cast<std::size_t>(i)];
      result = gi + result;  // fast-two-sum leading term; residues are discarded
    }
    return result;
  }

  void reset() { parts_.clear(); }

 private:
  std::vector<double> parts_;  // non-overlapping, increasing magnitude
};

}  // namespace treemark
