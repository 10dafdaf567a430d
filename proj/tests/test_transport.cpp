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

#include <doctest.h>

#include "bsf/error.hpp"
#include "bsf/inprocess_transport.hpp"
#include "bsf/tcp_transport.hpp"

#include <atomic>
#include <thread>

using namespace bsf;
using namespace std::chrono_literals;

namespace {

OrderMessage sample_order(bool exit = false) {
	return OrderMessage{0, exit, Bytes{std::byte{1}, std::byte{2}, std::byte{3}}};
}

ResultMessage result_for(std::size_t rank, std::uint64_t counter) {
	ResultMessage r;
	r.worker_rank = static_cast<std::uint32_t>(rank);
	r.reduce_counter = counter;
	if (counter > 0) {
		r.value = Bytes{static_cast<std::byte>(rank)};
	}
	return r;
}

long transport_rank(auto &&fn) {
	try {
		fn();
	} catch (const TransportError &e) {
		return e.rank();
	}
	FAIL("no TransportError thrown");
	return -99;
}

} // namespace

TEST_CASE("in-process broadcast delivers identical copies") {
	for (std::size_t k : {1u, 3u}) {
		InProcessTransport transport(k);
		const OrderMessage order = sample_order();
		transport.broadcast_order(order);
		for (std::size_t r = 0; r < k; ++r) {
			CHECK(transport.worker_link(r).receive_order() == order);
		}
		CHECK(transport.message_log().size() == k);
	}
}

TEST_CASE("in-process gather orders results by rank regardless of arrival") {
	InProcessTransport transport(3);
	for (std::size_t r : {2u, 0u, 1u}) {
		transport.worker_link(r).send_result(result_for(r, r + 1));
	}
	const auto results = transport.gather_results();
	REQUIRE(results.size() == 3);
	for (std::size_t r = 0; r < 3; ++r) {
		CHECK(results[r].worker_rank == r);
		CHECK(results[r].reduce_counter == r + 1);
	}
}

TEST_CASE("in-process link is FIFO") {
	InProcessTransport transport(1);
	auto &link = transport.worker_link(0);
	OrderMessage first = sample_order();
	OrderMessage second = sample_order();
	second.job_case = 1;
	transport.broadcast_order(first);
	transport.broadcast_order(second);
	CHECK(link.receive_order() == first);
	CHECK(link.receive_order() == second);
	link.send_result(result_for(0, 1));
	CHECK(transport.gather_results().size() == 1);
}

TEST_CASE("broken link is reported with its rank") {
	InProcessTransport transport(3);
	transport.sever(2);
	CHECK(transport_rank([&] { transport.broadcast_order(sample_order()); }) == 2);
}

TEST_CASE("silent worker makes gather time out") {
	InProcessTransport transport(2, 50ms);
	transport.worker_link(0).send_result(result_for(0, 1));
	CHECK(transport_rank([&] { transport.gather_results(); }) == 1);
}

TEST_CASE("send after the master closed fails") {
	InProcessTransport transport(1);
	transport.abort();
	CHECK(transport_rank([&] { transport.worker_link(0).send_result(result_for(0, 1)); }) == 0);
	CHECK_THROWS_AS(transport.worker_link(0).receive_order(), TransportError);
}

TEST_CASE("hosted workers stop at an exit order and their failures reach the master") {
	InProcessTransport transport(2);
	std::atomic<int> finished{0};
	transport.start_workers([&](WorkerLink &link) {
		for (;;) {
			const OrderMessage order = link.receive_order();
			if (order.exit) {
				++finished;
				return;
			}
			if (link.rank() == 1 && order.job_case == 1) {
				throw std::runtime_error("boom");
			}
			link.send_result(result_for(link.rank(), 1));
		}
	});
	transport.broadcast_order(sample_order());
	CHECK(transport.gather_results().size() == 2);
	OrderMessage failing = sample_order();
	failing.job_case = 1;
	transport.broadcast_order(failing);
	try {
		transport.gather_results();
		FAIL("expected a failure");
	} catch (const TransportError &e) {
		CHECK(e.rank() == 1);
		CHECK(std::string(e.what()).find("boom") != std::string::npos);
	}
	transport.broadcast_order(sample_order(true));
	transport.join_workers();
	CHECK(finished == 1);
}

TEST_CASE("socket addresses parse host:port") {
	const auto a = SocketAddress::parse("127.0.0.1:5000");
	CHECK(a.host == "127.0.0.1");
	CHECK(a.port == 5000);
	CHECK(a.to_string() == "127.0.0.1:5000");
	CHECK_THROWS_AS(SocketAddress::parse("localhost"), Error);
	CHECK_THROWS_AS(SocketAddress::parse("h:99999"), Error);
	CHECK_THROWS_AS(SocketAddress::parse("h:12x"), Error);
}

TEST_CASE("tcp transport broadcasts, gathers and refuses surplus workers") {
	TcpMasterTransport master(SocketAddress{"127.0.0.1", 0}, 2, TcpOptions{5000ms, 5000ms});
	const SocketAddress address{"127.0.0.1", master.port()};

	std::vector<std::jthread> workers;
	std::atomic<int> orders_seen{0};
	for (int w = 0; w < 2; ++w) {
		workers.emplace_back([&] {
			auto link = TcpWorkerLink::connect(address, 5000ms);
			CHECK(link.num_workers() == 2);
			for (;;) {
				const OrderMessage order = link.receive_order();
				if (order.exit) {
					return;
				}
				++orders_seen;
				link.send_result(result_for(link.rank(), link.rank() + 1));
			}
		});
	}
	master.start_workers({});
	master.broadcast_order(sample_order());
	const auto results = master.gather_results();
	REQUIRE(results.size() == 2);
	CHECK(results[0].worker_rank == 0);
	CHECK(results[1].worker_rank == 1);
	CHECK(results[1].reduce_counter == 2);

	// The listener is closed once all ranks are assigned.
	CHECK_THROWS_AS(TcpWorkerLink::connect(address, 300ms), TransportError);

	master.broadcast_order(sample_order(true));
	workers.clear();
	CHECK(orders_seen == 2);
}

TEST_CASE("tcp worker without a master fails after the connect timeout") {
	// Grab a free port, then release it so nothing listens there.
	std::uint16_t port = 0;
	{
		TcpMasterTransport probe(SocketAddress{"127.0.0.1", 0}, 1);
		port = probe.port();
	}
	const auto started = std::chrono::steady_clock::now();
	CHECK_THROWS_AS(TcpWorkerLink::connect(SocketAddress{"127.0.0.1", port}, 200ms), TransportError);
	CHECK(std::chrono::steady_clock::now() - started >= 200ms);
}

TEST_CASE("tcp gather reports a dead or silent worker") {
	TcpMasterTransport master(SocketAddress{"127.0.0.1", 0}, 2, TcpOptions{5000ms, 200ms});
	const SocketAddress address{"127.0.0.1", master.port()};
	std::optional<TcpWorkerLink> first, second;
	std::jthread connector([&] {
		first.emplace(TcpWorkerLink::connect(address, 5000ms));
		second.emplace(TcpWorkerLink::connect(address, 5000ms));
	});
	master.start_workers({});
	connector.join();
	TcpWorkerLink &rank0 = first->rank() == 0 ? *first : *second;
	rank0.send_result(result_for(0, 1));
	// Rank 1 never answers.
	CHECK(transport_rank([&] { master.gather_results(); }) == 1);
	master.abort();
	CHECK_THROWS_AS(rank0.receive_order(), TransportError);
}
