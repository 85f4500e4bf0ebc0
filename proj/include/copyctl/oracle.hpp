// Copyright 2026 The copyctl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COPYCTL_ORACLE_HPP_
#define COPYCTL_ORACLE_HPP_

#include <string>
#include <vector>

#include "copyctl/beam.hpp"

namespace copyctl {

// Largest |extended vocab|^max_len exhaustive_decode accepts.
inline constexpr double kExhaustiveSpaceLimit = 1e6;

// Enumerates every positive-probability sequence up to cfg.max_len that ends
// in EOS (plus force-finished max-length sequences), scoring each with the
// core scoring functions. Returns the best under the same ranking and
// tie-break as BeamSearch. Throws SpaceTooLarge above the guard.
Hypothesis ExhaustiveDecode(const StepModel& model, const SourceDocument& doc,
                            const DecodeConfig& cfg);

// Quadratic-scan n-gram overlap percentage: summary n-gram occurrences found
// anywhere in the article, over the summary's n-gram count.
double NaiveOverlap(const std::vector<std::string>& article,
                    const std::vector<std::string>& summary, int n);

}  // namespace copyctl

#endif  // COPYCTL_ORACLE_HPP_
