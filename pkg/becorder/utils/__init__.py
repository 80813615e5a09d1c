"""Report builders"""
