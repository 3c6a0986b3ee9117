// Copyright 2026 The mqcheck Authors
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

#ifndef MQCHECK_MQCHECK_HPP
#define MQCHECK_MQCHECK_HPP

#include "mqcheck/commands.hpp"
#include "mqcheck/engine.hpp"
#include "mqcheck/generate.hpp"
#include "mqcheck/model.hpp"
#include "mqcheck/oracle.hpp"
#include "mqcheck/parser.hpp"
#include "mqcheck/report.hpp"
#include "mqcheck/signatures.hpp"
#include "mqcheck/types.hpp"

#endif  // MQCHECK_MQCHECK_HPP
