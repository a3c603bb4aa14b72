#pragma once

#include "susyxxz/analysis.hpp"
#include "susyxxz/basis.hpp"
#include "susyxxz/dynamics.hpp"
#include "susyxxz/model.hpp"
#include "susyxxz/spectra.hpp"
#include "susyxxz/spectrum_cache.hpp"
#include "susyxxz/susy.hpp"
#include "susyxxz/version.hpp"
