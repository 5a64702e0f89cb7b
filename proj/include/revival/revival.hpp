#ifndef REVIVAL_REVIVAL_HPP
#define REVIVAL_REVIVAL_HPP

#include "revival/autocorr.hpp"
#include "revival/eigenbasis.hpp"
#include "revival/error.hpp"
#include "revival/evolution.hpp"
#include "revival/format.hpp"
#include "revival/grid.hpp"
#include "revival/phase.hpp"
#include "revival/scenario.hpp"
#include "revival/spectra.hpp"
#include "revival/units.hpp"
#include "revival/weights.hpp"

#endif  // REVIVAL_REVIVAL_HPP
