"""Sweep report generation"""