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

#ifndef TPIG_IO_HPP_
#define TPIG_IO_HPP_

#include <iosfwd>
#include <string>

#include "tpig/conversion.hpp"
#include "tpig/evaluation.hpp"
#include "tpig/game.hpp"
#include "tpig/solver.hpp"

namespace tpig {

// Wrapper for files holding either a source game or a conversion.
struct GameDoc {
  Repr tag = Repr::kSource;
  Vefg source;  // tag == kSource
  Tpi tpi;      // otherwise

  const Vefg& tree() const { return tag == Repr::kSource ? source : tpi.game; }
};

// Canonical text form: equal games serialize to equal bytes, and
// Parse(Serialize(d)) reproduces the document exactly.
std::string SerializeGame(const GameDoc& doc);
GameDoc ParseGame(const std::string& text);

std::string SerializeStrategy(const SolveView& view,
                              const BehavioralStrategy& s0,
                              const BehavioralStrategy& s1);
void ParseStrategy(const std::string& json, const SolveView& view,
                   BehavioralStrategy& s0, BehavioralStrategy& s1);

// CSV with one row per evaluation point (iteration, wall_seconds,
// exploitability). Rejects empty logs.
std::string EmitCurve(const std::vector<CurvePoint>& curve);

// Entry point behind the command-line binary. Returns the process exit
// code: 0 success, 1 validation failure, 2 usage error.
int CliDispatch(int argc, const char* const* argv, std::istream& in,
                std::ostream& out, std::ostream& err);

}  // namespace tpig

#endif  // TPIG_IO_HPP_
