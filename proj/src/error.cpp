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

#include "bsf/error.hpp"

namespace bsf {

std::string_view to_string(ErrorCode code) noexcept {
	switch (code) {
	case ErrorCode::ListTooShort: return "ListTooShort";
	case ErrorCode::InitFailed: return "InitFailed";
	case ErrorCode::IterationLimitExceeded: return "IterationLimitExceeded";
	case ErrorCode::TransportFailure: return "TransportFailure";
	case ErrorCode::MalformedFrame: return "MalformedFrame";
	case ErrorCode::MissingJobImplementation: return "MissingJobImplementation";
	case ErrorCode::CodecMismatch: return "CodecMismatch";
	case ErrorCode::InvalidJobCase: return "InvalidJobCase";
	case ErrorCode::InvalidConfig: return "InvalidConfig";
	case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
	case ErrorCode::NotConverged: return "NotConverged";
	case ErrorCode::ParseError: return "ParseError";
	case ErrorCode::IoError: return "IoError";
	}
	return "Unknown";
}

Error::Error(ErrorCode code, const std::string &what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

TransportError::TransportError(long rank, const std::string &what)
    : Error(ErrorCode::TransportFailure,
            rank >= 0 ? "worker " + std::to_string(rank) + ": " + what : what),
      rank_(rank) {}

} // namespace bsf
