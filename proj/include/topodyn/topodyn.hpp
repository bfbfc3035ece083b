#pragma once

#include "errors.hpp"
#include "graph.hpp"
#include "system.hpp"
#include "symbolic.hpp"
#include "chain.hpp"
#include "toral.hpp"
#include "systems.hpp"
#include "properties.hpp"
#include "catalog.hpp"
#include "config.hpp"
#include "analysis.hpp"
#include "report.hpp"
