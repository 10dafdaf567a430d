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

#include <cstddef>
#include <vector>

namespace bsf {

struct SublistAssignment {
	std::size_t offset = 0;
	std::size_t length = 0;

	bool operator==(const SublistAssignment &) const = default;
};

/// Contiguous split of a map-list over the workers. Entry j belongs to
/// worker rank j.
struct Partition {
	std::vector<SublistAssignment> assignments;

	std::size_t num_workers() const noexcept { return assignments.size(); }
	const SublistAssignment &operator[](std::size_t rank) const { return assignments.at(rank); }
};

/**
 * Splits a list of `list_size` elements into `num_workers` contiguous
 * sublists whose lengths differ by at most one. The first
 * `list_size % num_workers` ranks receive the extra element.
 *
 * Throws Error(ListTooShort) when list_size < num_workers and
 * Error(InvalidConfig) when num_workers is zero.
 */
Partition partition_list(std::size_t list_size, std::size_t num_workers);

} // namespace bsf
