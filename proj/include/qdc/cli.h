// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef QDC_CLI_H
#define QDC_CLI_H

#include <iosfwd>

namespace qdc {

/// Entry point of the `qdc` tool.
///
/// Subcommands: simulate, verify, aggregate, crossing, collapse, profile. Returns 0 on
/// success, 1 on runtime failures (I/O, failed checks, no crossing), 2 on usage errors.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qdc

#endif
