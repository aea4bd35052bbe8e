"""Experiment sweeps over FAV levels and seeds"""