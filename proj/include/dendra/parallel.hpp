// Copyright 2026 The Dendra Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Fork-join primitives with a deterministic contract: subtasks are
// independent, join before return, and the result is identical under any
// schedule. The current executor runs both halves on the calling thread;
// the parallelism hint is accepted but does not change observable output.

#ifndef DENDRA_PARALLEL_HPP
#define DENDRA_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

namespace dendra::parallel {

void set_parallelism_hint(unsigned threads);
unsigned parallelism_hint();

template <typename F, typename G>
void invoke(F&& left, G&& right) {
  left();
  right();
}

namespace detail {

template <typename T, typename Less>
void merge_rec(const T* a, std::size_t an, const T* b, std::size_t bn, T* out,
               Less less) {
  if (an + bn <= 32) {
    std::merge(a, a + an, b, b + bn, out, less);
    return;
  }
  if (an < bn) {
    merge_rec(b, bn, a, an, out, less);
    return;
  }
  std::size_t am = an / 2;
  std::size_t bm = std::lower_bound(b, b + bn, a[am], less) - b;
  invoke([&] { merge_rec(a, am, b, bm, out, less); },
         [&] { merge_rec(a + am, an - am, b + bm, bn - bm, out + am + bm, less); });
}

template <typename T, typename Pred>
std::size_t filter_rec(const T* in, std::size_t n, T* out, Pred pred) {
  if (n <= 64) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pred(in[i])) out[k++] = in[i];
    }
    return k;
  }
  std::size_t mid = n / 2;
  std::size_t left = 0, right = 0;
  std::vector<T> tmp(n - mid);
  invoke([&] { left = filter_rec(in, mid, out, pred); },
         [&] { right = filter_rec(in + mid, n - mid, tmp.data(), pred); });
  std::copy(tmp.begin(), tmp.begin() + right, out + left);
  return left + right;
}

}  // namespace detail

// Merges two rank-sorted sequences into one, order preserved.
template <typename T, typename Less>
std::vector<T> merge_sorted(const std::vector<T>& a, const std::vector<T>& b,
                            Less less) {
  std::vector<T> out(a.size() + b.size());
  detail::merge_rec(a.data(), a.size(), b.data(), b.size(), out.data(), less);
  return out;
}

// Keeps elements satisfying the predicate, order preserved.
template <typename T, typename Pred>
std::vector<T> filter(const std::vector<T>& in, Pred pred) {
  std::vector<T> out(in.size());
  std::size_t k = detail::filter_rec(in.data(), in.size(), out.data(), pred);
  out.resize(k);
  return out;
}

}  // namespace dendra::parallel

#endif  // DENDRA_PARALLEL_HPP
