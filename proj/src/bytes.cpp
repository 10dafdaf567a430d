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

#include "bsf/bytes.hpp"

#include "bsf/error.hpp"

#include <limits>
#include <string>

namespace bsf {

void ByteWriter::put_f64_array(std::span<const double> values) {
	if (values.size() > std::numeric_limits<std::uint32_t>::max()) {
		throw Error(ErrorCode::CodecMismatch, "array too long to encode");
	}
	put_u32(static_cast<std::uint32_t>(values.size()));
	for (double v : values) {
		put_f64(v);
	}
}

void ByteReader::require(std::size_t n) const {
	if (remaining() < n) {
		throw Error(ErrorCode::MalformedFrame, "payload truncated: need " + std::to_string(n) +
		                                           " bytes, have " + std::to_string(remaining()));
	}
}

std::uint8_t ByteReader::get_u8() {
	require(1);
	return std::to_integer<std::uint8_t>(bytes_[pos_++]);
}

std::vector<double> ByteReader::get_f64_array() {
	const std::uint32_t count = get_u32();
	require(std::size_t{count} * sizeof(double));
	std::vector<double> values(count);
	for (auto &v : values) {
		v = get_f64();
	}
	return values;
}

ByteView ByteReader::get_rest() {
	ByteView rest = bytes_.subspan(pos_);
	pos_ = bytes_.size();
	return rest;
}

void throw_trailing_bytes(std::size_t count) {
	throw Error(ErrorCode::CodecMismatch, std::to_string(count) + " undecoded trailing bytes");
}

} // namespace bsf
