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

#ifndef TPIG_ABSTRACTION_HPP_
#define TPIG_ABSTRACTION_HPP_

#include "tpig/conversion.hpp"

namespace tpig {

// Re-keys the coordinator's infosets of a folded game by (current belief,
// public observations) instead of the full prescription history. The tree is
// untouched; the infoset count can only go down.
Tpi AbstractImperfectRecall(const Tpi& folded);

// Drops every prescription that recommends one identical action to all
// private states in its scope (keeping it when it is the node's only
// prescription, or when the scope holds a single infoset), then applies the
// imperfect-recall re-keying.
Tpi AbstractLossy(const Tpi& folded);

// Full dispatch over representation tags, including the abstracted ones.
Tpi ConvertAny(const Vefg& g, Repr repr, const ConvertOptions& opts = {});

}  // namespace tpig

#endif  // TPIG_ABSTRACTION_HPP_
