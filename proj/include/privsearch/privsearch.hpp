#pragma once

// Umbrella header for the privacy-preserving people-search benchmark library.

#include "privsearch/bm25.hpp"
#include "privsearch/config.hpp"
#include "privsearch/corpus.hpp"
#include "privsearch/graph.hpp"
#include "privsearch/metrics.hpp"
#include "privsearch/pagerank.hpp"
#include "privsearch/privacy.hpp"
#include "privsearch/ranking.hpp"
#include "privsearch/reference.hpp"
#include "privsearch/report.hpp"
#include "privsearch/rng.hpp"
#include "privsearch/similarity.hpp"
#include "privsearch/sweep.hpp"
#include "privsearch/synth.hpp"
#include "privsearch/tasks.hpp"
#include "privsearch/weight_grid.hpp"
#include "privsearch/wilcoxon.hpp"
