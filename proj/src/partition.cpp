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

#include "bsf/partition.hpp"

#include "bsf/error.hpp"

#include <string>

namespace bsf {

Partition partition_list(std::size_t list_size, std::size_t num_workers) {
	if (num_workers == 0) {
		throw Error(ErrorCode::InvalidConfig, "number of workers must be at least 1");
	}
	if (list_size < num_workers) {
		throw Error(ErrorCode::ListTooShort,
		            "list size " + std::to_string(list_size) + " is less than the number of workers " +
		                std::to_string(num_workers));
	}
	const std::size_t base = list_size / num_workers;
	const std::size_t remainder = list_size % num_workers;

	Partition partition;
	partition.assignments.reserve(num_workers);
	std::size_t offset = 0;
	for (std::size_t rank = 0; rank < num_workers; ++rank) {
		const std::size_t length = base + (rank < remainder ? 1 : 0);
		partition.assignments.push_back({offset, length});
		offset += length;
	}
	return partition;
}

} // namespace bsf
