#pragma once

#include "genland/bessel.hpp"
#include "genland/diagnostics.hpp"
#include "genland/dynamics.hpp"
#include "genland/error.hpp"
#include "genland/landscape.hpp"
#include "genland/linalg.hpp"
#include "genland/models.hpp"
#include "genland/report.hpp"
#include "genland/sambe.hpp"
