// Copyright 2026 the tpig authors.
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

#ifndef TPIG_RATIONAL_HPP_
#define TPIG_RATIONAL_HPP_

#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace tpig {

// Exact rational arithmetic for chance probabilities, payoffs and beliefs.
// Equality on these values is meaningful (infoset merging, belief keys), so
// no floating point is allowed anywhere in the game model.
using Rat = boost::multiprecision::cpp_rational;

inline double ToDouble(const Rat& r) { return r.convert_to<double>(); }

// Canonical "num/den" text form; integers render without the denominator.
std::string RatToString(const Rat& r);

// Parses "num/den" or "num". Returns nullopt on malformed input.
std::optional<Rat> RatFromString(const std::string& s);

}  // namespace tpig

#endif  // TPIG_RATIONAL_HPP_
