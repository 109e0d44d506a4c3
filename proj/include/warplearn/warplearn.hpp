#pragma once

// Umbrella header: gradient learning on time series under dynamic time
// warping — elastic embeddings and proximities, elastic linear classifiers,
// DTW-space means, nearest-neighbor baselines and the benchmark harness.

#include "warplearn/classifier.hpp"
#include "warplearn/cluster.hpp"
#include "warplearn/cv.hpp"
#include "warplearn/dataset.hpp"
#include "warplearn/dtw.hpp"
#include "warplearn/elastic.hpp"
#include "warplearn/errors.hpp"
#include "warplearn/experiment.hpp"
#include "warplearn/mean.hpp"
#include "warplearn/model_io.hpp"
#include "warplearn/nn.hpp"
#include "warplearn/report.hpp"
#include "warplearn/rng.hpp"
#include "warplearn/types.hpp"
#include "warplearn/version.hpp"
#include "warplearn/warping.hpp"
