// Copyright 2026 The qentropy Authors
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

#pragma once

#include "qentropy/opcore.hpp"
#include "qentropy/entropy.hpp"
#include "qentropy/kraus.hpp"
#include "qentropy/channels.hpp"
#include "qentropy/pce.hpp"
#include "qentropy/roof.hpp"
#include "qentropy/json_io.hpp"
#include "qentropy/harness.hpp"
