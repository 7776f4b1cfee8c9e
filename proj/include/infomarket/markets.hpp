#pragma once

#include "infomarket/markets/best_response.hpp"
#include "infomarket/markets/equilibrium.hpp"
#include "infomarket/markets/mechanics.hpp"
