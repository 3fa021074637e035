#pragma once

#include "qfisher/cramer_rao.hpp"
#include "qfisher/divergence.hpp"
#include "qfisher/fisher.hpp"
#include "qfisher/grid.hpp"
#include "qfisher/location_family.hpp"
#include "qfisher/moments.hpp"
#include "qfisher/quantum_state.hpp"
#include "qfisher/uncertainty.hpp"
