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

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

namespace bsf {

/// Unbounded FIFO of encoded frames between two threads.
class FrameChannel {
public:
	/// Throws TransportError(rank) if the channel was closed.
	void push(Bytes frame, long rank);

	/// Throws TransportError(rank) on close or when `timeout` elapses.
	Bytes pop(std::chrono::milliseconds timeout, long rank);

	void close(std::string reason);
	bool closed() const;

private:
	mutable std::mutex mutex_;
	std::condition_variable ready_;
	std::deque<Bytes> queue_;
	std::optional<std::string> closed_reason_;
};

/// Record of master-side traffic, appended only by the master thread.
struct MessageLogEntry {
	enum class Kind { Order, ExitOrder, Result } kind;
	std::size_t rank;

	bool operator==(const MessageLogEntry &) const = default;
};

/**
 * Transport whose workers are threads of the current process. Messages are
 * framed with the same wire encoding as the TCP transport, so master and
 * workers share no objects.
 */
class InProcessTransport final : public Transport {
public:
	explicit InProcessTransport(std::size_t num_workers,
	                            std::chrono::milliseconds gather_timeout = kDefaultGatherTimeout);
	~InProcessTransport() override;

	InProcessTransport(const InProcessTransport &) = delete;
	InProcessTransport &operator=(const InProcessTransport &) = delete;

	std::size_t num_workers() const override { return links_.size(); }
	void start_workers(const WorkerBody &body) override;
	void join_workers() override;
	void broadcast_order(const OrderMessage &order) override;
	std::vector<ResultMessage> gather_results() override;
	void abort() noexcept override;

	/// Direct access to a worker end, for driving a worker by hand in tests.
	WorkerLink &worker_link(std::size_t rank);

	/// Fault injection: breaks both directions of one link.
	void sever(std::size_t rank);

	const std::vector<MessageLogEntry> &message_log() const noexcept { return log_; }
	void clear_message_log() { log_.clear(); }

private:
	struct Link;
	class Endpoint;

	std::chrono::milliseconds gather_timeout_;
	std::vector<std::unique_ptr<Link>> links_;
	std::vector<std::jthread> threads_;
	std::vector<MessageLogEntry> log_;
};

} // namespace bsf
