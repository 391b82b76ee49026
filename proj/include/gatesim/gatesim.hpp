// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gatesim/case_study.hpp"
#include "gatesim/control.hpp"
#include "gatesim/controller.hpp"
#include "gatesim/engine.hpp"
#include "gatesim/flow_table.hpp"
#include "gatesim/frame.hpp"
#include "gatesim/gcl.hpp"
#include "gatesim/host.hpp"
#include "gatesim/launch_config.hpp"
#include "gatesim/link.hpp"
#include "gatesim/mac.hpp"
#include "gatesim/network.hpp"
#include "gatesim/phase_calc.hpp"
#include "gatesim/qbv_port.hpp"
#include "gatesim/random.hpp"
#include "gatesim/report.hpp"
#include "gatesim/scenario.hpp"
#include "gatesim/sr_table.hpp"
#include "gatesim/switch.hpp"
#include "gatesim/time.hpp"
#include "gatesim/trace.hpp"
