# Statistical services: samples, distributions, fences, detection, simulation, rendering
