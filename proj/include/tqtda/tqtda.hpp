#pragma once

#include "tqtda/complex.hpp"
#include "tqtda/corpus.hpp"
#include "tqtda/discriminant.hpp"
#include "tqtda/experiments.hpp"
#include "tqtda/homology.hpp"
#include "tqtda/qswap.hpp"
#include "tqtda/thermal.hpp"
#include "tqtda/version.hpp"
