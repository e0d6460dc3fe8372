// Copyright 2026 The ovlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OVLP_OVLP_HPP
#define OVLP_OVLP_HPP

#include "ovlp/errors.hpp"
#include "ovlp/operator_core.hpp"
#include "ovlp/povm_measure.hpp"
#include "ovlp/qrv.hpp"
#include "ovlp/optimize.hpp"
#include "ovlp/state_sup.hpp"
#include "ovlp/minimax.hpp"
#include "ovlp/norms.hpp"
#include "ovlp/oracle.hpp"
#include "ovlp/tensor.hpp"
#include "ovlp/random.hpp"
#include "ovlp/json_io.hpp"
#include "ovlp/verify.hpp"

#endif  // OVLP_OVLP_HPP
