#pragma once

#include "dicke/constants.hpp"
#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/meanfield.hpp"
#include "dicke/lanczos.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/sweep.hpp"
#include "dicke/io.hpp"
#include "dicke/config.hpp"
#include "dicke/cli.hpp"
