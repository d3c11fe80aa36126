// SPDX-License-Identifier: Apache-2.0
//
// irs-link: link-level simulation and beamforming for IRS-aided wireless links
// ------------------------------------------------------------------------

#pragma once

#include "irs/numerics.hpp"
#include "irs/channel.hpp"
#include "irs/reflection.hpp"
#include "irs/beamforming.hpp"
#include "irs/experiments.hpp"
#include "irs/config.hpp"
#include "irs/cli.hpp"
