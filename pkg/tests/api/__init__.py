"""API tests package"""
