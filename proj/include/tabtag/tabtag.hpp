#pragma once

#include "tabtag/aggregate.hpp"
#include "tabtag/embedding.hpp"
#include "tabtag/error.hpp"
#include "tabtag/harness.hpp"
#include "tabtag/ingest.hpp"
#include "tabtag/ontology.hpp"
#include "tabtag/report.hpp"
#include "tabtag/score.hpp"
