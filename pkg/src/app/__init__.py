"""命令行应用装配层。"""
