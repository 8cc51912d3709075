#pragma once

#include "evbench/alignment.hpp"
#include "evbench/diagnostics.hpp"
#include "evbench/error.hpp"
#include "evbench/evaluation.hpp"
#include "evbench/focus.hpp"
#include "evbench/geometry.hpp"
#include "evbench/ingest.hpp"
#include "evbench/metrics.hpp"
#include "evbench/report.hpp"
#include "evbench/synth.hpp"
