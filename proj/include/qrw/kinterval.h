// Copyright 2026 The qrw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRW_KINTERVAL_H_
#define QRW_KINTERVAL_H_

#include <span>
#include <string>
#include <vector>

namespace qrw {

// Closed interval [lo, hi]; endpoints may be infinite.
struct Interval {
  double lo;
  double hi;

  bool Contains(double v) const { return lo <= v && v <= hi; }
  bool IsPoint() const { return lo == hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// A finite union of at most `capacity()` disjoint closed intervals, sorted by
// lower bound. This is the carrier of all range analysis: every numeric (and
// boolean, as a subset of {0, 1}) column type holds one.
//
// Whenever an operation would produce more than `capacity()` pieces, the two
// pieces separated by the smallest gap are merged until the bound holds, so
// the result is always a superset of the exact answer.
class KInterval {
 public:
  static constexpr int kDefaultCapacity = 8;

  // The empty set.
  KInterval() = default;
  explicit KInterval(int capacity);

  static KInterval Empty(int capacity = kDefaultCapacity);
  static KInterval Full(int capacity = kDefaultCapacity);
  static KInterval Closed(double lo, double hi,
                          int capacity = kDefaultCapacity);
  static KInterval Point(double v, int capacity = kDefaultCapacity);
  static KInterval FromPieces(std::vector<Interval> pieces,
                              int capacity = kDefaultCapacity);
  static KInterval FromValues(std::span<const double> values,
                              int capacity = kDefaultCapacity);

  const std::vector<Interval>& pieces() const { return pieces_; }
  int capacity() const { return capacity_; }

  bool empty() const { return pieces_.empty(); }
  // Convex hull bounds. Undefined on the empty set.
  double min() const { return pieces_.front().lo; }
  double max() const { return pieces_.back().hi; }
  Interval Hull() const { return {min(), max()}; }

  bool Contains(double v) const;
  bool IsSubsetOf(const KInterval& other) const;
  // Non-empty and every piece is a single point.
  bool IsPoints() const;
  std::vector<double> Points() const;
  bool IsBounded() const;
  bool IsFull() const;

  // Largest sub-union whose pieces contain integers, with endpoints rounded
  // inward (ceil of lower bound, floor of upper bound).
  KInterval RoundedToIntegers() const;
  // Same pieces, convex hull if capacity shrinks below the piece count.
  KInterval WithCapacity(int capacity) const;

  // `{1, 2, 3}` for point sets, `[0, 1]` for one piece, `{[0, 1], [2, 3]}`
  // otherwise, `{}` when empty.
  std::string ToString() const;

  friend bool operator==(const KInterval& a, const KInterval& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  void Normalize();

  std::vector<Interval> pieces_;
  int capacity_ = kDefaultCapacity;
};

KInterval Union(const KInterval& a, const KInterval& b);
KInterval Intersect(const KInterval& a, const KInterval& b);

// Shortest round-trip decimal form; infinities print as `+inf` / `-inf`.
std::string FormatDouble(double v);

}  // namespace qrw

#endif  // QRW_KINTERVAL_H_
