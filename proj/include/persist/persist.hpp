#pragma once

#include "persist/csv.hpp"
#include "persist/error.hpp"
#include "persist/forecast.hpp"
#include "persist/longterm.hpp"
#include "persist/master_equation.hpp"
#include "persist/models.hpp"
#include "persist/random.hpp"
#include "persist/series.hpp"
#include "persist/shortterm.hpp"
#include "persist/synth.hpp"
#include "persist/version.hpp"
