#pragma once

#include "qg/builders.hpp"
#include "qg/config.hpp"
#include "qg/corpus.hpp"
#include "qg/field.hpp"
#include "qg/grid.hpp"
#include "qg/inequalities.hpp"
#include "qg/io.hpp"
#include "qg/littlewood_paley.hpp"
#include "qg/regularity.hpp"
#include "qg/solver.hpp"
#include "qg/util.hpp"
#include "qg/version.hpp"
