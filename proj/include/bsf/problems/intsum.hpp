/*
 *   Copyright 2026 The BSF Skeleton Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "bsf/problem.hpp"

#include <cstddef>
#include <cstdint>

namespace bsf::intsum {

/// Toy problem with an exactly associative fold: each round maps every
/// list value v to v * scale, sums the products and derives the next scale
/// from the sum. Used for exact equivalence checks and benchmarks.
struct IntSumOptions {
	std::size_t list_size = 1000;
	std::uint64_t seed = 1;
	/// Stop after this many iterations.
	std::size_t rounds = 3;
	/// Decline every odd-indexed element (reduceCounter 0).
	bool ignore_odd = false;
};

struct IntSumParameter {
	std::int64_t round = 0;
	std::int64_t scale = 1;
	std::int64_t total = 0;

	bool operator==(const IntSumParameter &) const = default;
};

struct IntSumElem {
	std::size_t index = 0;
	std::int64_t value = 0;
};

using IntSumProblem = Problem<IntSumParameter, IntSumElem, std::int64_t>;

/// List values are uniform in [-1000, 1000], fixed by the seed.
std::int64_t list_value(std::uint64_t seed, std::size_t index);

IntSumProblem make_intsum_problem(const IntSumOptions &options);

/// Expected result after the given options have run, computed by a plain
/// loop over the list.
IntSumParameter intsum_reference(const IntSumOptions &options);

} // namespace bsf::intsum
