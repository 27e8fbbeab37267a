# Core module: settings, logging, exceptions
