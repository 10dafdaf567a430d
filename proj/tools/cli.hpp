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

#include "bsf/error.hpp"

#include <ostream>

namespace bsf::cli {

inline constexpr int kExitUsage = 2;
inline constexpr int kExitUnexpected = 1;

/// Process exit status for an error category: 10 + its position in ErrorCode.
int exit_status(ErrorCode code) noexcept;

/// Entry point of the `bsf` tool: subcommands run, bench and worker.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace bsf::cli
