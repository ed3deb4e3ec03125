#pragma once

// Umbrella header for the F2P contour-integral eigensolver library.

#include "f2p/block.hpp"
#include "f2p/config.hpp"
#include "f2p/dense_eig.hpp"
#include "f2p/eigensolvers.hpp"
#include "f2p/errors.hpp"
#include "f2p/filter.hpp"
#include "f2p/matrix_market.hpp"
#include "f2p/metrics.hpp"
#include "f2p/qr.hpp"
#include "f2p/quadrature.hpp"
#include "f2p/random.hpp"
#include "f2p/report.hpp"
#include "f2p/runner.hpp"
#include "f2p/shifted.hpp"
#include "f2p/sparse.hpp"
#include "f2p/sweep.hpp"
#include "f2p/synthetic.hpp"
