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
#include "bsf/config.hpp"
#include "bsf/engine.hpp"
#include "bsf/error.hpp"
#include "bsf/inprocess_transport.hpp"
#include "bsf/partition.hpp"
#include "bsf/problem.hpp"
#include "bsf/tcp_transport.hpp"
#include "bsf/transport.hpp"
#include "bsf/validate.hpp"
#include "bsf/wire.hpp"
