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

#include "bsf/bytes.hpp"

#include <chrono>
#include <cstdint>
#include <optional>

namespace bsf {

// Frame layout: [length: u32 LE][type: u8][payload], length = 1 + |payload|.

enum class MessageType : std::uint8_t {
	Order = 0x01,
	Result = 0x02,
	Exit = 0x03,
	Assign = 0x04,
};

/// Reason byte carried by an Exit frame.
enum class ExitReason : std::uint8_t {
	Rejected = 0x01,
	Aborted = 0x02,
};

struct Frame {
	MessageType type{};
	Bytes payload;

	bool operator==(const Frame &) const = default;
};

inline constexpr std::size_t kFrameHeaderSize = 5;
inline constexpr std::uint32_t kMaxFrameLength = 0xFFFFFFFEu;

bool is_known_message_type(std::uint8_t type) noexcept;

Bytes encode_frame(MessageType type, ByteView payload);

/// Decodes exactly one frame occupying all of `bytes`. Truncation, trailing
/// data, a zero length or an unknown type throw Error(MalformedFrame).
Frame decode_frame(ByteView bytes);

/// Reads the length prefix of a frame header (first 4 bytes).
std::uint32_t frame_length(ByteView header);

struct OrderMessage {
	std::uint8_t job_case = 0;
	bool exit = false;
	Bytes parameter;

	bool operator==(const OrderMessage &) const = default;
};

struct ResultMessage {
	std::uint32_t worker_rank = 0;
	std::uint64_t reduce_counter = 0;
	/// Absent (empty) when reduce_counter is zero.
	Bytes value;
	/// Worker-side map+reduce time. Not carried on the wire.
	std::chrono::duration<double> elapsed{};
};

/// Rank assignment sent by a master to a freshly connected worker.
struct AssignMessage {
	std::uint32_t rank = 0;
	std::uint32_t num_workers = 0;

	bool operator==(const AssignMessage &) const = default;
};

Bytes encode_order(const OrderMessage &order);
OrderMessage decode_order(ByteView payload);

Bytes encode_result(const ResultMessage &result);
ResultMessage decode_result(ByteView payload);

Bytes encode_assign(const AssignMessage &assign);
AssignMessage decode_assign(ByteView payload);

} // namespace bsf
