// Copyright 2026 The fairpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Convenience header pulling in the whole library.

#ifndef FAIRPP_FAIRPP_HPP_
#define FAIRPP_FAIRPP_HPP_

#include "fairpp/barycenter_lp.hpp"
#include "fairpp/data_io.hpp"
#include "fairpp/dp_estimation.hpp"
#include "fairpp/errors.hpp"
#include "fairpp/grid.hpp"
#include "fairpp/harness.hpp"
#include "fairpp/matrix.hpp"
#include "fairpp/metrics.hpp"
#include "fairpp/pipeline.hpp"
#include "fairpp/random.hpp"
#include "fairpp/samples.hpp"
#include "fairpp/simplex.hpp"
#include "fairpp/transport.hpp"

#endif  // FAIRPP_FAIRPP_HPP_
