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

#include <stdexcept>
#include <string>
#include <string_view>

namespace bsf {

/// Failure categories surfaced by the skeleton and the bundled problems.
enum class ErrorCode {
	ListTooShort,
	InitFailed,
	IterationLimitExceeded,
	TransportFailure,
	MalformedFrame,
	MissingJobImplementation,
	CodecMismatch,
	InvalidJobCase,
	InvalidConfig,
	ZeroDiagonal,
	NotConverged,
	ParseError,
	IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
	Error(ErrorCode code, const std::string &what);

	ErrorCode code() const noexcept { return code_; }

private:
	ErrorCode code_;
};

/// Thrown by transports. `rank()` names the worker link involved, or -1.
class TransportError : public Error {
public:
	TransportError(long rank, const std::string &what);

	long rank() const noexcept { return rank_; }

private:
	long rank_;
};

} // namespace bsf
