/*
   Copyright 2026 The hardy-factor authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

namespace hardy {
namespace tol {

// Relative singular-value cutoff for rank decisions (orthonormalize,
// nullspaces, intersections).
inline constexpr double kRankRel = 1e-8;

// Orthonormality of constructed bases: max |Gram - I|.
inline constexpr double kOrtho = 1e-10;

// Exact algebraic identities on polynomial data.
inline constexpr double kAlgebra = 1e-12;

// Shift-invariance residual accepted by compress_shift / reducing_test.
inline constexpr double kInvariance = 1e-10;

// Doubly-commuting verdict and innerness certificates.
inline constexpr double kCommutator = 1e-8;
inline constexpr double kInner = 1e-8;

// Relative singular-value cutoff for multiplication-operator kernels.
inline constexpr double kKernelRel = 1e-10;

// Pointwise rank decisions in local_rank.
inline constexpr double kLocalRankRel = 1e-8;

// Completion pipeline residual gates.
inline constexpr double kCompletion = 1e-10;

// Torus sampling defaults.
inline constexpr int kTorusGrid = 8;
inline constexpr int kRankSamples = 64;
inline constexpr double kSampleRadius = 0.9;

}  // namespace tol
}  // namespace hardy
