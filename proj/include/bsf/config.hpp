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
#include <functional>
#include <ostream>
#include <string_view>

namespace bsf {

/// Receives one iteration trace line (without a trailing newline).
using TraceSink = std::function<void(std::string_view)>;

struct RunConfig {
	/// Number of workers K.
	std::size_t num_workers = 1;
	/// Largest job number of the workflow, 0..3.
	int max_job_case = 0;
	/// Decimal digits for floats in trace lines and reports.
	int output_precision = 4;
	bool iter_output_enabled = false;
	/// Emit a trace line every trace_count-th iteration.
	std::size_t trace_count = 1;
	/// Map over a worker's sublist with several threads.
	bool intra_worker_parallel = false;
	/// Thread count for the parallel map; 0 means all available.
	std::size_t intra_worker_threads = 0;
	/// Runs that have not stopped after this many iterations fail.
	std::size_t max_iterations = 1'000'000;

	TraceSink trace;
	/// Destination of parameters_output and problem_output; null to skip.
	std::ostream *output = nullptr;
};

/// Throws Error(InvalidConfig) for out-of-range settings.
void check_config(const RunConfig &config);

} // namespace bsf
