//
// Copyright 2026 The ASAG Adversarial Insertion Authors
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
//

#ifndef ASAG_CLI_H_
#define ASAG_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace asag {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVictim = 2;
inline constexpr int kExitInternal = 3;

// `args` excludes the program name. Subcommands: extract-lexicon,
// train-tagger, ingest, probe, apply, analyze, stats, replay.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace asag

#endif  // ASAG_CLI_H_
