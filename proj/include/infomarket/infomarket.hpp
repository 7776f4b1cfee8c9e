#pragma once

#include "infomarket/accuracy.hpp"
#include "infomarket/equivalence.hpp"
#include "infomarket/errors.hpp"
#include "infomarket/markets.hpp"
#include "infomarket/model.hpp"
#include "infomarket/numeric.hpp"
#include "infomarket/oracle.hpp"
#include "infomarket/voting.hpp"
