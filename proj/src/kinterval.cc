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

#include "qrw/kinterval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

namespace qrw {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (v == 0) return "0";
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

KInterval::KInterval(int capacity) : capacity_(std::max(1, capacity)) {}

KInterval KInterval::Empty(int capacity) { return KInterval(capacity); }

KInterval KInterval::Full(int capacity) {
  return Closed(-kInf, kInf, capacity);
}

KInterval KInterval::Closed(double lo, double hi, int capacity) {
  return FromPieces({{lo, hi}}, capacity);
}

KInterval KInterval::Point(double v, int capacity) {
  return Closed(v, v, capacity);
}

KInterval KInterval::FromPieces(std::vector<Interval> pieces, int capacity) {
  KInterval result(capacity);
  result.pieces_ = std::move(pieces);
  result.Normalize();
  return result;
}

KInterval KInterval::FromValues(std::span<const double> values, int capacity) {
  std::vector<Interval> pieces;
  pieces.reserve(values.size());
  for (double v : values) pieces.push_back({v, v});
  return FromPieces(std::move(pieces), capacity);
}

void KInterval::Normalize() {
  // A NaN endpoint means nothing is known about that piece.
  bool unknown = false;
  std::erase_if(pieces_, [&](const Interval& p) {
    if (std::isnan(p.lo) || std::isnan(p.hi)) {
      unknown = true;
      return true;
    }
    return p.lo > p.hi;
  });
  if (unknown) pieces_.push_back({-kInf, kInf});
  if (pieces_.empty()) return;

  std::sort(pieces_.begin(), pieces_.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  std::vector<Interval> merged;
  merged.reserve(pieces_.size());
  for (const Interval& p : pieces_) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }
  // Overflow: close the smallest gaps first.
  while (static_cast<int>(merged.size()) > capacity_) {
    std::size_t best = 0;
    double best_gap = merged[1].lo - merged[0].hi;
    for (std::size_t i = 1; i + 1 < merged.size(); ++i) {
      double gap = merged[i + 1].lo - merged[i].hi;
      if (gap < best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    merged[best].hi = std::max(merged[best].hi, merged[best + 1].hi);
    merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  pieces_ = std::move(merged);
}

bool KInterval::Contains(double v) const {
  for (const Interval& p : pieces_) {
    if (p.Contains(v)) return true;
  }
  return false;
}

bool KInterval::IsSubsetOf(const KInterval& other) const {
  for (const Interval& p : pieces_) {
    bool covered = false;
    for (const Interval& q : other.pieces_) {
      if (q.lo <= p.lo && p.hi <= q.hi) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

bool KInterval::IsPoints() const {
  if (pieces_.empty()) return false;
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Interval& p) {
    return p.IsPoint() && std::isfinite(p.lo);
  });
}

std::vector<double> KInterval::Points() const {
  std::vector<double> points;
  if (!IsPoints()) return points;
  for (const Interval& p : pieces_) points.push_back(p.lo);
  return points;
}

bool KInterval::IsBounded() const {
  return !pieces_.empty() && std::isfinite(min()) && std::isfinite(max());
}

bool KInterval::IsFull() const {
  return pieces_.size() == 1 && pieces_[0].lo == -kInf &&
         pieces_[0].hi == kInf;
}

KInterval KInterval::RoundedToIntegers() const {
  std::vector<Interval> rounded;
  for (const Interval& p : pieces_) {
    double lo = std::ceil(p.lo);
    double hi = std::floor(p.hi);
    if (lo <= hi) rounded.push_back({lo, hi});
  }
  return FromPieces(std::move(rounded), capacity_);
}

KInterval KInterval::WithCapacity(int capacity) const {
  return FromPieces(pieces_, capacity);
}

std::string KInterval::ToString() const {
  if (pieces_.empty()) return "{}";
  std::string out;
  if (IsPoints()) {
    out = "{";
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (i > 0) out += ", ";
      out += FormatDouble(pieces_[i].lo);
    }
    return out + "}";
  }
  auto piece = [](const Interval& p) {
    return "[" + FormatDouble(p.lo) + ", " + FormatDouble(p.hi) + "]";
  };
  if (pieces_.size() == 1) return piece(pieces_[0]);
  out = "{";
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i > 0) out += ", ";
    out += piece(pieces_[i]);
  }
  return out + "}";
}

KInterval Union(const KInterval& a, const KInterval& b) {
  std::vector<Interval> pieces = a.pieces();
  pieces.insert(pieces.end(), b.pieces().begin(), b.pieces().end());
  return KInterval::FromPieces(std::move(pieces),
                               std::max(a.capacity(), b.capacity()));
}

KInterval Intersect(const KInterval& a, const KInterval& b) {
  std::vector<Interval> pieces;
  for (const Interval& p : a.pieces()) {
    for (const Interval& q : b.pieces()) {
      double lo = std::max(p.lo, q.lo);
      double hi = std::min(p.hi, q.hi);
      if (lo <= hi) pieces.push_back({lo, hi});
    }
  }
  return KInterval::FromPieces(std::move(pieces),
                               std::max(a.capacity(), b.capacity()));
}

}  // namespace qrw
