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

#ifndef TPIG_ERRORS_HPP_
#define TPIG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tpig {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define TPIG_DEFINE_ERROR(Name)                                   \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

TPIG_DEFINE_ERROR(InvalidParams);
TPIG_DEFINE_ERROR(VisibilityIncomplete);
TPIG_DEFINE_ERROR(NotTimeable);
TPIG_DEFINE_ERROR(PreconditionFailed);
TPIG_DEFINE_ERROR(FoldNotApplicable);
TPIG_DEFINE_ERROR(ZeroProbabilityEvidence);
TPIG_DEFINE_ERROR(EmptyActionSet);
TPIG_DEFINE_ERROR(NotTwoPlayerZeroSum);
TPIG_DEFINE_ERROR(MissingInfosetPolicy);
TPIG_DEFINE_ERROR(ImperfectRecallResponder);
TPIG_DEFINE_ERROR(ProvenanceMissing);
TPIG_DEFINE_ERROR(BudgetExceeded);
TPIG_DEFINE_ERROR(ParseError);
TPIG_DEFINE_ERROR(VersionMismatch);

#undef TPIG_DEFINE_ERROR

#define TPIG_CHECK(cond, ErrType, msg) \
  do {                                 \
    if (!(cond)) throw ErrType(msg);   \
  } while (0)

}  // namespace tpig

#endif  // TPIG_ERRORS_HPP_
