"""liederiv 測試套件"""
