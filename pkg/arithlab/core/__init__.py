# core module - settings, errors and report writing shared by every service
