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

#include "bsf/config.hpp"

#include "bsf/error.hpp"
#include "bsf/problem.hpp"

namespace bsf {

void check_config(const RunConfig &config) {
	if (config.num_workers == 0) {
		throw Error(ErrorCode::InvalidConfig, "num_workers must be at least 1");
	}
	if (config.max_job_case < 0 || config.max_job_case > kMaxJobCase) {
		throw Error(ErrorCode::InvalidConfig, "max_job_case must be in 0..3");
	}
	if (config.trace_count == 0) {
		throw Error(ErrorCode::InvalidConfig, "trace_count must be at least 1");
	}
	if (config.output_precision < 0 || config.output_precision > 30) {
		throw Error(ErrorCode::InvalidConfig, "output_precision must be in 0..30");
	}
	if (config.max_iterations == 0) {
		throw Error(ErrorCode::InvalidConfig, "max_iterations must be at least 1");
	}
}

} // namespace bsf
