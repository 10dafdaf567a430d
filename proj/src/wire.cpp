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

#include "bsf/wire.hpp"

#include "bsf/error.hpp"

#include <string>

namespace bsf {

bool is_known_message_type(std::uint8_t type) noexcept {
	return type >= 0x01 && type <= 0x04;
}

Bytes encode_frame(MessageType type, ByteView payload) {
	if (payload.size() >= kMaxFrameLength) {
		throw Error(ErrorCode::MalformedFrame, "payload too large for a frame");
	}
	Bytes out;
	out.reserve(kFrameHeaderSize + payload.size());
	ByteWriter writer(out);
	writer.put_u32(static_cast<std::uint32_t>(payload.size() + 1));
	writer.put_u8(static_cast<std::uint8_t>(type));
	writer.put_bytes(payload);
	return out;
}

std::uint32_t frame_length(ByteView header) {
	ByteReader reader(header.first(std::min<std::size_t>(header.size(), 4)));
	return reader.get_u32();
}

Frame decode_frame(ByteView bytes) {
	if (bytes.size() < kFrameHeaderSize) {
		throw Error(ErrorCode::MalformedFrame,
		            "frame truncated: " + std::to_string(bytes.size()) + " bytes");
	}
	ByteReader reader(bytes);
	const std::uint32_t length = reader.get_u32();
	if (length == 0) {
		throw Error(ErrorCode::MalformedFrame, "zero frame length");
	}
	if (std::size_t{length} + 4 != bytes.size()) {
		throw Error(ErrorCode::MalformedFrame, "frame length " + std::to_string(length) +
		                                           " does not match " +
		                                           std::to_string(bytes.size() - 4) + " bytes");
	}
	const std::uint8_t type = reader.get_u8();
	if (!is_known_message_type(type)) {
		throw Error(ErrorCode::MalformedFrame, "unknown message type " + std::to_string(type));
	}
	const ByteView payload = reader.get_rest();
	return Frame{static_cast<MessageType>(type), Bytes(payload.begin(), payload.end())};
}

Bytes encode_order(const OrderMessage &order) {
	ByteWriter writer;
	writer.put_u8(order.job_case);
	writer.put_u8(order.exit ? 1 : 0);
	writer.put_bytes(order.parameter);
	return writer.take();
}

OrderMessage decode_order(ByteView payload) {
	ByteReader reader(payload);
	OrderMessage order;
	order.job_case = reader.get_u8();
	const std::uint8_t exit = reader.get_u8();
	if (exit > 1) {
		throw Error(ErrorCode::MalformedFrame, "order exit flag must be 0 or 1");
	}
	order.exit = exit == 1;
	const ByteView rest = reader.get_rest();
	order.parameter.assign(rest.begin(), rest.end());
	return order;
}

Bytes encode_result(const ResultMessage &result) {
	if (result.reduce_counter == 0 && !result.value.empty()) {
		throw Error(ErrorCode::MalformedFrame, "result with zero reduce_counter carries a value");
	}
	ByteWriter writer;
	writer.put_u32(result.worker_rank);
	writer.put_u64(result.reduce_counter);
	writer.put_bytes(result.value);
	return writer.take();
}

ResultMessage decode_result(ByteView payload) {
	ByteReader reader(payload);
	ResultMessage result;
	result.worker_rank = reader.get_u32();
	result.reduce_counter = reader.get_u64();
	const ByteView rest = reader.get_rest();
	result.value.assign(rest.begin(), rest.end());
	if (result.reduce_counter == 0 && !result.value.empty()) {
		throw Error(ErrorCode::MalformedFrame, "result with zero reduce_counter carries a value");
	}
	return result;
}

Bytes encode_assign(const AssignMessage &assign) {
	ByteWriter writer;
	writer.put_u32(assign.rank);
	writer.put_u32(assign.num_workers);
	return writer.take();
}

AssignMessage decode_assign(ByteView payload) {
	ByteReader reader(payload);
	AssignMessage assign;
	assign.rank = reader.get_u32();
	assign.num_workers = reader.get_u32();
	if (!reader.empty()) {
		throw Error(ErrorCode::MalformedFrame, "trailing bytes in assign message");
	}
	return assign;
}

} // namespace bsf
