"""Published per-class figures used as expected values (AU$ unless noted)."""

# class_id: (sediment 2013, sediment 2023, sediment change, carbon 2013, carbon 2023, carbon change)
MONETARY = {
    1: (12378, 18485, 6108, 541449, 1690017, 1148568),
    2: (37500, 55650, 18150, 3039241, 4288323, 1249082),
    3: (8150, 15085, 6935, 302839, 759127, 456288),
    4: (1260, 2458, 1198, 70016, 260110, 190094),
    5: (373, 642, 269, 72704, 232639, 159934),
    6: (25744, 37822, 12078, 1323104, 1659310, 336206),
    7: (17458, 22595, 5138, 944346, 1283886, 339540),
    8: (6485, 9658, 3173, 262779, 434709, 171930),
    9: (1110, 1119, 9, 69439, 113333, 43895),
}
MONETARY_TOTAL = (110456, 163513, 53057, 6625917, 10721454, 4095537)

# class_id: (t C 2013, t C 2023)
CARBON_T = {
    1: (3987, 12446),
    2: (22382, 31581),
    3: (2230, 5590),
    4: (516, 1916),
    5: (535, 1713),
    6: (9744, 12220),
    7: (6955, 9455),
    8: (1935, 3201),
    9: (511, 835),
}
AREAS_HA = {1: 58, 2: 141, 3: 26, 4: 9, 5: 9, 6: 68, 7: 39, 8: 12, 9: 7}

# sediment note: class_id -> (tonnes, AU$)
NOTE1 = {1: (50, 12378), 2: (150, 37500), 3: (33, 8150), 4: (5, 1260), 5: (1, 373), 6: (103, 25744), 7: (70, 17458), 8: (26, 6485), 9: (4, 1111)}
# carbon note: class_id -> (t C, t CO2-e, AU$)
NOTE2 = {
    1: (3987, 14634, 541449),
    2: (22382, 82142, 3039241),
    3: (2230, 8185, 302839),
    4: (516, 1892, 70016),
    5: (535, 1965, 72704),
    6: (9744, 35760, 1323104),
    7: (6954, 25523, 944346),
    8: (1935, 7102, 262779),
    9: (511, 1877, 69439),
}
