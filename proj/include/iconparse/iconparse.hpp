#pragma once

// Everything except the HTTP service (service.hpp pulls in cpp-httplib).

#include "iconparse/baseline.hpp"
#include "iconparse/bench.hpp"
#include "iconparse/chart.hpp"
#include "iconparse/compatibility.hpp"
#include "iconparse/counters.hpp"
#include "iconparse/error.hpp"
#include "iconparse/lexicon.hpp"
#include "iconparse/repl.hpp"
#include "iconparse/report.hpp"
#include "iconparse/session.hpp"
#include "iconparse/synthetic.hpp"
