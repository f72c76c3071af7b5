// Copyright 2026 The hcontent Authors
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

#include "hcontent/choquet.hpp"
#include "hcontent/content.hpp"
#include "hcontent/error.hpp"
#include "hcontent/grid.hpp"
#include "hcontent/io.hpp"
#include "hcontent/packing.hpp"
#include "hcontent/parallel.hpp"
#include "hcontent/testbed.hpp"
#include "hcontent/verify.hpp"
#include "hcontent/version.hpp"
