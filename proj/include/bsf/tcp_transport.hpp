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

#include "bsf/transport.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bsf {

struct SocketAddress {
	std::string host;
	std::uint16_t port = 0;

	/// Parses "host:port". Throws Error(InvalidConfig) on malformed input.
	static SocketAddress parse(std::string_view text);
	std::string to_string() const;
};

/// Owning wrapper around a connected or listening socket descriptor.
class Socket {
public:
	Socket() = default;
	explicit Socket(int fd) : fd_(fd) {}
	~Socket();

	Socket(Socket &&other) noexcept;
	Socket &operator=(Socket &&other) noexcept;
	Socket(const Socket &) = delete;
	Socket &operator=(const Socket &) = delete;

	int fd() const noexcept { return fd_; }
	bool valid() const noexcept { return fd_ >= 0; }
	void close() noexcept;

private:
	int fd_ = -1;
};

inline constexpr auto kNoTimeout = std::chrono::milliseconds::max();

/// Writes one frame. Throws TransportError(rank) on failure.
void write_frame(Socket &socket, MessageType type, ByteView payload, long rank);

/// Reads one complete frame, waiting at most `timeout` for it to start and
/// complete. Throws TransportError(rank) on EOF or timeout and
/// Error(MalformedFrame) on a bad header.
Frame read_frame(Socket &socket, std::chrono::milliseconds timeout, long rank);

struct TcpOptions {
	std::chrono::milliseconds accept_timeout{60'000};
	std::chrono::milliseconds gather_timeout = kDefaultGatherTimeout;
};

/**
 * Master side of the TCP transport. Binds on construction; start_workers()
 * accepts exactly num_workers connections, assigns ranks in connection
 * order and then stops listening, so surplus workers are refused.
 */
class TcpMasterTransport final : public Transport {
public:
	TcpMasterTransport(const SocketAddress &listen_address, std::size_t num_workers,
	                   TcpOptions options = {});
	~TcpMasterTransport() override;

	/// The bound port; differs from the requested one when that was 0.
	std::uint16_t port() const noexcept { return port_; }

	std::size_t num_workers() const override { return num_workers_; }
	void start_workers(const WorkerBody &body) override;
	void broadcast_order(const OrderMessage &order) override;
	std::vector<ResultMessage> gather_results() override;
	void abort() noexcept override;

private:
	std::size_t num_workers_;
	TcpOptions options_;
	Socket listener_;
	std::uint16_t port_ = 0;
	std::vector<Socket> workers_;
};

/// Worker side of the TCP transport.
class TcpWorkerLink final : public WorkerLink {
public:
	/// Connects (retrying until `connect_timeout`) and waits for the rank
	/// assignment. A rejected or unreachable connection throws TransportError.
	static TcpWorkerLink connect(const SocketAddress &master,
	                             std::chrono::milliseconds connect_timeout);

	std::size_t rank() const override { return rank_; }
	std::size_t num_workers() const override { return num_workers_; }
	OrderMessage receive_order() override;
	void send_result(const ResultMessage &result) override;

private:
	TcpWorkerLink(Socket socket, std::size_t rank, std::size_t num_workers)
	    : socket_(std::move(socket)), rank_(rank), num_workers_(num_workers) {}

	Socket socket_;
	std::size_t rank_;
	std::size_t num_workers_;
};

} // namespace bsf
