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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace bsf {

using Bytes = std::vector<std::byte>;
using ByteView = std::span<const std::byte>;

/// Appends fixed-width little-endian values to a byte buffer.
class ByteWriter {
public:
	ByteWriter() = default;
	explicit ByteWriter(Bytes &out) : out_(&out) {}

	void put_u8(std::uint8_t v) { out().push_back(static_cast<std::byte>(v)); }
	void put_u32(std::uint32_t v) { put_le(v); }
	void put_u64(std::uint64_t v) { put_le(v); }
	void put_i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v)); }
	void put_f64(double v) { put_le(std::bit_cast<std::uint64_t>(v)); }
	void put_bytes(ByteView bytes) { out().insert(out().end(), bytes.begin(), bytes.end()); }

	/// u32 element count followed by the elements.
	void put_f64_array(std::span<const double> values);

	Bytes &buffer() { return out(); }
	Bytes take() { return std::move(out()); }

private:
	template <typename U>
	void put_le(U v) {
		for (std::size_t i = 0; i < sizeof(U); ++i) {
			out().push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFFu));
		}
	}
	Bytes &out() { return out_ ? *out_ : owned_; }

	Bytes owned_;
	Bytes *out_ = nullptr;
};

/// Bounds-checked little-endian reader. Underflow throws Error(MalformedFrame).
class ByteReader {
public:
	explicit ByteReader(ByteView bytes) : bytes_(bytes) {}

	std::uint8_t get_u8();
	std::uint32_t get_u32() { return get_le<std::uint32_t>(); }
	std::uint64_t get_u64() { return get_le<std::uint64_t>(); }
	std::int64_t get_i64() { return static_cast<std::int64_t>(get_le<std::uint64_t>()); }
	double get_f64() { return std::bit_cast<double>(get_le<std::uint64_t>()); }
	std::vector<double> get_f64_array();
	ByteView get_rest();

	std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
	bool empty() const noexcept { return remaining() == 0; }

private:
	void require(std::size_t n) const;

	template <typename U>
	U get_le() {
		require(sizeof(U));
		U v = 0;
		for (std::size_t i = 0; i < sizeof(U); ++i) {
			v |= static_cast<U>(std::to_integer<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
		}
		pos_ += sizeof(U);
		return v;
	}

	ByteView bytes_;
	std::size_t pos_ = 0;
};

/// Binary encoder/decoder pair a problem supplies for each wire-carried type.
template <typename T>
struct Codec {
	std::function<void(const T &, ByteWriter &)> encode;
	std::function<T(ByteReader &)> decode;

	explicit operator bool() const noexcept { return encode && decode; }

	Bytes to_bytes(const T &value) const {
		ByteWriter writer;
		encode(value, writer);
		return writer.take();
	}

	/// Decodes a complete buffer; trailing bytes are a CodecMismatch.
	T from_bytes(ByteView bytes) const;
};

void throw_trailing_bytes(std::size_t count);

template <typename T>
T Codec<T>::from_bytes(ByteView bytes) const {
	ByteReader reader(bytes);
	T value = decode(reader);
	if (!reader.empty()) {
		throw_trailing_bytes(reader.remaining());
	}
	return value;
}

} // namespace bsf
