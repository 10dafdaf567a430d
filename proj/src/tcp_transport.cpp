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

#include "bsf/tcp_transport.hpp"

#include "bsf/error.hpp"

#include <algorithm>
#include <arpa/inet.h>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <thread>
#include <unistd.h>

namespace bsf {
namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text() { return std::strerror(errno); }

class Deadline {
public:
	explicit Deadline(std::chrono::milliseconds timeout)
	    : infinite_(timeout == kNoTimeout), at_(infinite_ ? Clock::time_point{} : Clock::now() + timeout) {}

	/// Milliseconds left as a poll() argument; -1 means wait forever.
	int poll_timeout() const {
		if (infinite_) {
			return -1;
		}
		const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(at_ - Clock::now());
		return static_cast<int>(std::clamp<long long>(left.count(), 0, 1'000'000'000));
	}
	bool expired() const { return !infinite_ && Clock::now() >= at_; }

private:
	bool infinite_;
	Clock::time_point at_;
};

/// Waits for `events` on `fd`. Returns false on timeout.
bool wait_for(int fd, short events, const Deadline &deadline) {
	for (;;) {
		pollfd pfd{fd, events, 0};
		const int rc = ::poll(&pfd, 1, deadline.poll_timeout());
		if (rc > 0) {
			return true;
		}
		if (rc == 0) {
			return false;
		}
		if (errno != EINTR) {
			return false;
		}
	}
}

void read_exact(Socket &socket, std::byte *out, std::size_t n, const Deadline &deadline, long rank) {
	std::size_t done = 0;
	while (done < n) {
		if (!wait_for(socket.fd(), POLLIN, deadline)) {
			throw TransportError(rank, "timed out waiting for data");
		}
		const ssize_t got = ::recv(socket.fd(), out + done, n - done, 0);
		if (got == 0) {
			throw TransportError(rank, "connection closed by peer");
		}
		if (got < 0) {
			if (errno == EINTR || errno == EAGAIN) {
				continue;
			}
			throw TransportError(rank, "receive failed: " + errno_text());
		}
		done += static_cast<std::size_t>(got);
	}
}

addrinfo *resolve(const SocketAddress &address, bool passive) {
	addrinfo hints{};
	hints.ai_family = AF_INET;
	hints.ai_socktype = SOCK_STREAM;
	hints.ai_flags = passive ? AI_PASSIVE : 0;
	addrinfo *result = nullptr;
	const std::string port = std::to_string(address.port);
	const char *host = address.host.empty() ? nullptr : address.host.c_str();
	if (const int rc = ::getaddrinfo(host, port.c_str(), &hints, &result); rc != 0) {
		throw Error(ErrorCode::InvalidConfig,
		            "cannot resolve " + address.to_string() + ": " + ::gai_strerror(rc));
	}
	return result;
}

void set_nodelay(int fd) {
	int one = 1;
	::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

} // namespace

SocketAddress SocketAddress::parse(std::string_view text) {
	const auto colon = text.rfind(':');
	if (colon == std::string_view::npos) {
		throw Error(ErrorCode::InvalidConfig, "address must be host:port, got '" + std::string(text) + "'");
	}
	SocketAddress address;
	address.host = std::string(text.substr(0, colon));
	const std::string_view port = text.substr(colon + 1);
	unsigned value = 0;
	const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
	if (ec != std::errc{} || ptr != port.data() + port.size() || value > 65535) {
		throw Error(ErrorCode::InvalidConfig, "invalid port in '" + std::string(text) + "'");
	}
	address.port = static_cast<std::uint16_t>(value);
	return address;
}

std::string SocketAddress::to_string() const { return host + ":" + std::to_string(port); }

Socket::~Socket() { close(); }

Socket::Socket(Socket &&other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

Socket &Socket::operator=(Socket &&other) noexcept {
	if (this != &other) {
		close();
		fd_ = std::exchange(other.fd_, -1);
	}
	return *this;
}

void Socket::close() noexcept {
	if (fd_ >= 0) {
		::close(fd_);
		fd_ = -1;
	}
}

void write_frame(Socket &socket, MessageType type, ByteView payload, long rank) {
	if (!socket.valid()) {
		throw TransportError(rank, "link is closed");
	}
	const Bytes frame = encode_frame(type, payload);
	std::size_t done = 0;
	while (done < frame.size()) {
		const ssize_t sent = ::send(socket.fd(), frame.data() + done, frame.size() - done, MSG_NOSIGNAL);
		if (sent < 0) {
			if (errno == EINTR) {
				continue;
			}
			throw TransportError(rank, "send failed: " + errno_text());
		}
		done += static_cast<std::size_t>(sent);
	}
}

Frame read_frame(Socket &socket, std::chrono::milliseconds timeout, long rank) {
	if (!socket.valid()) {
		throw TransportError(rank, "link is closed");
	}
	const Deadline deadline(timeout);
	Bytes bytes(4);
	read_exact(socket, bytes.data(), 4, deadline, rank);
	const std::uint32_t length = frame_length(bytes);
	if (length == 0 || length > kMaxFrameLength) {
		throw Error(ErrorCode::MalformedFrame, "bad frame length " + std::to_string(length));
	}
	bytes.resize(4 + std::size_t{length});
	read_exact(socket, bytes.data() + 4, length, deadline, rank);
	return decode_frame(bytes);
}

TcpMasterTransport::TcpMasterTransport(const SocketAddress &listen_address, std::size_t num_workers,
                                       TcpOptions options)
    : num_workers_(num_workers), options_(options) {
	if (num_workers == 0) {
		throw Error(ErrorCode::InvalidConfig, "number of workers must be at least 1");
	}
	addrinfo *info = resolve(listen_address, true);
	Socket listener(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
	if (!listener.valid()) {
		::freeaddrinfo(info);
		throw TransportError(-1, "socket() failed: " + errno_text());
	}
	int one = 1;
	::setsockopt(listener.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
	const int bound = ::bind(listener.fd(), info->ai_addr, info->ai_addrlen);
	::freeaddrinfo(info);
	if (bound != 0) {
		throw TransportError(-1, "cannot bind " + listen_address.to_string() + ": " + errno_text());
	}
	if (::listen(listener.fd(), static_cast<int>(num_workers) + 4) != 0) {
		throw TransportError(-1, "listen() failed: " + errno_text());
	}
	sockaddr_in local{};
	socklen_t len = sizeof(local);
	::getsockname(listener.fd(), reinterpret_cast<sockaddr *>(&local), &len);
	port_ = ntohs(local.sin_port);
	listener_ = std::move(listener);
}

TcpMasterTransport::~TcpMasterTransport() = default;

void TcpMasterTransport::start_workers(const WorkerBody &) {
	const Deadline deadline(options_.accept_timeout);
	while (workers_.size() < num_workers_) {
		if (!wait_for(listener_.fd(), POLLIN, deadline)) {
			throw TransportError(-1, "only " + std::to_string(workers_.size()) + " of " +
			                             std::to_string(num_workers_) +
			                             " workers connected before the accept timeout");
		}
		Socket worker(::accept(listener_.fd(), nullptr, nullptr));
		if (!worker.valid()) {
			if (errno == EINTR || errno == ECONNABORTED) {
				continue;
			}
			throw TransportError(-1, "accept() failed: " + errno_text());
		}
		set_nodelay(worker.fd());
		const auto rank = static_cast<std::uint32_t>(workers_.size());
		write_frame(worker, MessageType::Assign,
		            encode_assign({rank, static_cast<std::uint32_t>(num_workers_)}), rank);
		workers_.push_back(std::move(worker));
	}
	listener_.close();
}

void TcpMasterTransport::broadcast_order(const OrderMessage &order) {
	if (workers_.size() != num_workers_) {
		throw TransportError(-1, "workers are not connected");
	}
	const Bytes payload = encode_order(order);
	for (std::size_t rank = 0; rank < workers_.size(); ++rank) {
		write_frame(workers_[rank], MessageType::Order, payload, static_cast<long>(rank));
	}
}

std::vector<ResultMessage> TcpMasterTransport::gather_results() {
	if (workers_.size() != num_workers_) {
		throw TransportError(-1, "workers are not connected");
	}
	const auto start = Clock::now();
	std::vector<ResultMessage> results;
	results.reserve(workers_.size());
	// Serial reads in rank order; early arrivals wait in the socket buffers.
	for (std::size_t rank = 0; rank < workers_.size(); ++rank) {
		const auto used = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
		const auto left = std::max(std::chrono::milliseconds{0}, options_.gather_timeout - used);
		const long r = static_cast<long>(rank);
		const Frame frame = read_frame(workers_[rank], left, r);
		if (frame.type != MessageType::Result) {
			throw TransportError(r, "expected a result frame");
		}
		ResultMessage result = decode_result(frame.payload);
		if (result.worker_rank != rank) {
			throw TransportError(r, "result claims rank " + std::to_string(result.worker_rank));
		}
		results.push_back(std::move(result));
	}
	return results;
}

void TcpMasterTransport::abort() noexcept {
	const Bytes reason{static_cast<std::byte>(ExitReason::Aborted)};
	for (std::size_t rank = 0; rank < workers_.size(); ++rank) {
		try {
			write_frame(workers_[rank], MessageType::Exit, reason, static_cast<long>(rank));
		} catch (...) {
		}
		workers_[rank].close();
	}
	listener_.close();
}

TcpWorkerLink TcpWorkerLink::connect(const SocketAddress &master,
                                     std::chrono::milliseconds connect_timeout) {
	const Deadline deadline(connect_timeout);
	std::string last_error = "no attempt made";
	for (;;) {
		addrinfo *info = resolve(master, false);
		Socket socket(::socket(info->ai_family, info->ai_socktype, info->ai_protocol));
		const int rc = socket.valid() ? ::connect(socket.fd(), info->ai_addr, info->ai_addrlen) : -1;
		::freeaddrinfo(info);
		if (rc == 0) {
			set_nodelay(socket.fd());
			// The assignment arrives once the master starts accepting.
			const Frame frame = read_frame(socket, kNoTimeout, -1);
			if (frame.type == MessageType::Exit) {
				throw TransportError(-1, "master " + master.to_string() + " rejected the connection");
			}
			if (frame.type != MessageType::Assign) {
				throw TransportError(-1, "expected a rank assignment from the master");
			}
			const AssignMessage assign = decode_assign(frame.payload);
			if (assign.num_workers == 0 || assign.rank >= assign.num_workers) {
				throw TransportError(-1, "invalid rank assignment");
			}
			return TcpWorkerLink(std::move(socket), assign.rank, assign.num_workers);
		}
		last_error = errno_text();
		if (deadline.expired()) {
			throw TransportError(-1, "cannot connect to master at " + master.to_string() + ": " +
			                             last_error);
		}
		std::this_thread::sleep_for(std::chrono::milliseconds{50});
	}
}

OrderMessage TcpWorkerLink::receive_order() {
	const long rank = static_cast<long>(rank_);
	const Frame frame = read_frame(socket_, kNoTimeout, rank);
	if (frame.type == MessageType::Exit) {
		throw TransportError(rank, "master aborted the run");
	}
	if (frame.type != MessageType::Order) {
		throw TransportError(rank, "expected an order frame");
	}
	return decode_order(frame.payload);
}

void TcpWorkerLink::send_result(const ResultMessage &result) {
	write_frame(socket_, MessageType::Result, encode_result(result), static_cast<long>(rank_));
}

} // namespace bsf
