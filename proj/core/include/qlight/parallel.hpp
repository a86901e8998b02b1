// Copyright 2026 The qlight Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QLIGHT_PARALLEL_HPP
#define QLIGHT_PARALLEL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>

namespace qlight {

/// SplitMix64 finalizer of (seed, stream): independent, reproducible
/// per-task seeds regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Number of workers used when a caller passes 0.
unsigned default_workers();

/// Runs body(i) for i in [0, n) on up to `workers` threads. Results must be
/// written to per-index slots; the first exception is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned workers = 0);

}  // namespace qlight

#endif  // QLIGHT_PARALLEL_HPP
