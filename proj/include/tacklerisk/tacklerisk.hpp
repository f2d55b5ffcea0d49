/* Copyright 2026 The tacklerisk Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include "tacklerisk/ball_tracker.hpp"
#include "tacklerisk/detection.hpp"
#include "tacklerisk/errors.hpp"
#include "tacklerisk/head.hpp"
#include "tacklerisk/kalman.hpp"
#include "tacklerisk/metrics.hpp"
#include "tacklerisk/risk.hpp"
#include "tacklerisk/roles.hpp"
#include "tacklerisk/segment_io.hpp"
#include "tacklerisk/synthgen.hpp"
