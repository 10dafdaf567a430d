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

#include "bsf/inprocess_transport.hpp"

#include "bsf/error.hpp"

#include <algorithm>

namespace bsf {

void FrameChannel::push(Bytes frame, long rank) {
	{
		std::lock_guard lock(mutex_);
		if (closed_reason_) {
			throw TransportError(rank, "link closed: " + *closed_reason_);
		}
		queue_.push_back(std::move(frame));
	}
	ready_.notify_one();
}

Bytes FrameChannel::pop(std::chrono::milliseconds timeout, long rank) {
	std::unique_lock lock(mutex_);
	const auto available = [&] { return !queue_.empty() || closed_reason_.has_value(); };
	bool ready = true;
	if (timeout == std::chrono::milliseconds::max()) {
		ready_.wait(lock, available);
	} else {
		ready = ready_.wait_for(lock, timeout, available);
	}
	// Frames queued before a close are still delivered.
	if (!queue_.empty()) {
		Bytes frame = std::move(queue_.front());
		queue_.pop_front();
		return frame;
	}
	if (closed_reason_) {
		throw TransportError(rank, "link closed: " + *closed_reason_);
	}
	if (!ready) {
		throw TransportError(rank, "timed out after " + std::to_string(timeout.count()) + " ms");
	}
	throw TransportError(rank, "spurious wakeup");
}

void FrameChannel::close(std::string reason) {
	{
		std::lock_guard lock(mutex_);
		if (!closed_reason_) {
			closed_reason_ = std::move(reason);
		}
	}
	ready_.notify_all();
}

bool FrameChannel::closed() const {
	std::lock_guard lock(mutex_);
	return closed_reason_.has_value();
}

struct InProcessTransport::Link {
	FrameChannel to_worker;
	FrameChannel to_master;
	std::unique_ptr<Endpoint> endpoint;
};

class InProcessTransport::Endpoint final : public WorkerLink {
public:
	Endpoint(Link &link, std::size_t rank, std::size_t num_workers)
	    : link_(link), rank_(rank), num_workers_(num_workers) {}

	std::size_t rank() const override { return rank_; }
	std::size_t num_workers() const override { return num_workers_; }

	OrderMessage receive_order() override {
		const Bytes bytes = link_.to_worker.pop(std::chrono::milliseconds::max(), rank_long());
		Frame frame = decode_frame(bytes);
		if (frame.type == MessageType::Exit) {
			throw TransportError(rank_long(), "master aborted the run");
		}
		if (frame.type != MessageType::Order) {
			throw TransportError(rank_long(), "expected an order frame");
		}
		return decode_order(frame.payload);
	}

	void send_result(const ResultMessage &result) override {
		link_.to_master.push(encode_frame(MessageType::Result, encode_result(result)), rank_long());
	}

private:
	long rank_long() const { return static_cast<long>(rank_); }

	Link &link_;
	std::size_t rank_;
	std::size_t num_workers_;
};

InProcessTransport::InProcessTransport(std::size_t num_workers,
                                       std::chrono::milliseconds gather_timeout)
    : gather_timeout_(gather_timeout) {
	if (num_workers == 0) {
		throw Error(ErrorCode::InvalidConfig, "number of workers must be at least 1");
	}
	links_.reserve(num_workers);
	for (std::size_t rank = 0; rank < num_workers; ++rank) {
		auto link = std::make_unique<Link>();
		link->endpoint = std::make_unique<Endpoint>(*link, rank, num_workers);
		links_.push_back(std::move(link));
	}
}

InProcessTransport::~InProcessTransport() {
	abort();
	join_workers();
}

void InProcessTransport::start_workers(const WorkerBody &body) {
	if (!threads_.empty()) {
		throw Error(ErrorCode::InvalidConfig, "workers already started");
	}
	threads_.reserve(links_.size());
	for (auto &link : links_) {
		threads_.emplace_back([body, &link = *link] {
			try {
				body(*link.endpoint);
			} catch (const std::exception &e) {
				link.to_master.close(std::string("worker failed: ") + e.what());
			} catch (...) {
				link.to_master.close("worker failed with an unknown exception");
			}
		});
	}
}

void InProcessTransport::join_workers() {
	for (auto &thread : threads_) {
		if (thread.joinable()) {
			thread.join();
		}
	}
	threads_.clear();
}

void InProcessTransport::broadcast_order(const OrderMessage &order) {
	const Bytes frame = encode_frame(MessageType::Order, encode_order(order));
	for (std::size_t rank = 0; rank < links_.size(); ++rank) {
		links_[rank]->to_worker.push(frame, static_cast<long>(rank));
		log_.push_back({order.exit ? MessageLogEntry::Kind::ExitOrder : MessageLogEntry::Kind::Order,
		                rank});
	}
}

std::vector<ResultMessage> InProcessTransport::gather_results() {
	using Clock = std::chrono::steady_clock;
	const auto deadline = Clock::now() + gather_timeout_;
	std::vector<ResultMessage> results;
	results.reserve(links_.size());
	for (std::size_t rank = 0; rank < links_.size(); ++rank) {
		const auto left = std::max(std::chrono::milliseconds{0},
		                           std::chrono::duration_cast<std::chrono::milliseconds>(
		                               deadline - Clock::now()));
		const Bytes bytes = links_[rank]->to_master.pop(left, static_cast<long>(rank));
		const Frame frame = decode_frame(bytes);
		if (frame.type != MessageType::Result) {
			throw TransportError(static_cast<long>(rank), "expected a result frame");
		}
		ResultMessage result = decode_result(frame.payload);
		if (result.worker_rank != rank) {
			throw TransportError(static_cast<long>(rank),
			                     "result claims rank " + std::to_string(result.worker_rank));
		}
		log_.push_back({MessageLogEntry::Kind::Result, rank});
		results.push_back(std::move(result));
	}
	return results;
}

void InProcessTransport::abort() noexcept {
	for (auto &link : links_) {
		link->to_worker.close("master aborted the run");
		link->to_master.close("master aborted the run");
	}
}

WorkerLink &InProcessTransport::worker_link(std::size_t rank) {
	return *links_.at(rank)->endpoint;
}

void InProcessTransport::sever(std::size_t rank) {
	auto &link = *links_.at(rank);
	link.to_worker.close("connection broken");
	link.to_master.close("connection broken");
}

} // namespace bsf
