#pragma once

#include "common.hpp"
#include "extremal.hpp"
#include "expander.hpp"
#include "fp_embed.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "lemmas.hpp"
#include "linkage.hpp"
#include "matching.hpp"
#include "pipeline.hpp"
#include "subgraph.hpp"
#include "subsets.hpp"
#include "tree.hpp"
#include "verify.hpp"
#include "vertex_set.hpp"
