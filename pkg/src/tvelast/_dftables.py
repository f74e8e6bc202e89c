"""Embedded quantile tables for the Dickey-Fuller t-ratio.

Generated by scripts/gen_adf_tables.py (Monte Carlo under the
unit-root null, seed 20250809); do not edit by hand. Each table row
is keyed by 1/T for regression sample size T; the 1/T = 0 row is
the asymptotic limit extrapolated from the largest sizes.
"""

PROBS = (0.001, 0.005, 0.01, 0.02, 0.025, 0.05, 0.075, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95, 0.975, 0.99, 0.995, 0.999)

TABLES = {
    'none': (
        (0.0, (-3.287291782651961, -2.795770033943497, -2.5661772457805974, -2.3111780600259473, -2.2250896621114165, -1.942515718251906, -1.7588166937432272, -1.6174373469336847, -1.4027222846891005, -1.2349277496376638, -0.9660480931587107, -0.7340216045032496, -0.5027295926159823, -0.24109420883988872, 0.05379221776470264, 0.4044082715243855, 0.618393841503932, 0.8868557775853587, 1.2811141734779927, 1.6157756227320441, 2.017989140442916, 2.280062391634519, 2.8058992385320147)),
        (0.0004, (-3.2949019210892487, -2.8026069183552638, -2.56918207258705, -2.3132707332737628, -2.2259916470520666, -1.9447822981516887, -1.760416686501284, -1.6184683476056805, -1.402814879725019, -1.2345393975954924, -0.9662236632739883, -0.7346427242254628, -0.5032352009596115, -0.24215099399106732, 0.053917504599266336, 0.40557433987444363, 0.6192626116271969, 0.8851914390209639, 1.2774136760210193, 1.610479799882389, 2.013111443376845, 2.2735792413948994, 2.8119913834161276)),
        (0.001, (-3.2983795989293276, -2.7979977084841696, -2.5698028329621825, -2.3124042720938065, -2.2279936248314485, -1.940893266516616, -1.7567926720921156, -1.6172015780759785, -1.403451959165076, -1.2360158923393842, -0.9661815620973838, -0.7331652659900326, -0.5010307853721442, -0.23890740897307938, 0.05418099729387858, 0.4043595179157558, 0.6193355506743194, 0.890550423843005, 1.288990413005216, 1.6259801696686498, 2.020888509053942, 2.2897388379303707, 2.8139204758976764)),
        (0.002, (-3.2861237729665644, -2.805777663556005, -2.5720624852137344, -2.3174157825668034, -2.23068931497809, -1.9427877107189309, -1.7568886603599163, -1.6151100554824054, -1.4005682814137075, -1.2324710625731579, -0.9613174753992638, -0.7289032393775444, -0.4987089203882759, -0.2383714864507001, 0.05438707490125201, 0.40358454687180584, 0.6189608731203011, 0.889356567695449, 1.2832763215641443, 1.6266958761529675, 2.0267656875324582, 2.29402049518773, 2.8322773304001156)),
        (0.004, (-3.3208989307486543, -2.8216862214209093, -2.583002607189462, -2.322390293026405, -2.235988766990507, -1.9449631934164504, -1.7575142100891397, -1.6175224724216184, -1.4024884090506708, -1.2340130940307807, -0.9630795125596733, -0.7301079029396162, -0.49802047043714737, -0.23775612935990253, 0.05514448294230628, 0.4062225731269813, 0.6222298433413802, 0.8911747818191748, 1.2876046076018808, 1.629221523412265, 2.018811423022861, 2.2923761481828926, 2.851990936082192)),
        (0.01, (-3.3512196938730825, -2.832795549167125, -2.5883041328492205, -2.3252328212188695, -2.2375100420477536, -1.942666958884958, -1.7553094910486795, -1.613234897459286, -1.3956270338537309, -1.2272457222168005, -0.9563685545884333, -0.7246118639864684, -0.4928747126561548, -0.23199806121807878, 0.06184752639463348, 0.4119050932448971, 0.6263533220137045, 0.8976940521903087, 1.295142085481136, 1.6433770782134107, 2.045279558855224, 2.3222652090827314, 2.8864816985047925)),
        (0.02, (-3.426515126273185, -2.869681362352089, -2.612980577319277, -2.340363552360292, -2.249330957854108, -1.9484783114305924, -1.7576000518798685, -1.6131304372868203, -1.3933340983696456, -1.2229363320151352, -0.9512980041601302, -0.7187720010420077, -0.48646315001668805, -0.2253880293621446, 0.06904142755698182, 0.41944183923586853, 0.6363825669516793, 0.9080872888836019, 1.3104820730571662, 1.6605975460640718, 2.0731073279253467, 2.3566293509164944, 2.960522928878419)),
        (0.04, (-3.539092305721146, -2.9340568080157237, -2.6565306565178837, -2.363974377941676, -2.267124991784468, -1.9511942237518134, -1.7540505594100604, -1.6057943889145094, -1.381994107043382, -1.2099157467195611, -0.9368062607906799, -0.705280470397578, -0.47113246634312156, -0.2080034777289166, 0.08566822990338141, 0.43609283331311505, 0.6528908614339207, 0.926845066518855, 1.3379780510212718, 1.7037087448033117, 2.144082734330195, 2.449198552934703, 3.1056387218234245)),
    ),
    'constant': (
        (0.0, (-4.105574458230517, -3.644615426747402, -3.437695700648402, -3.2057264391022855, -3.1274083190881496, -2.864574144400734, -2.698266145590631, -2.56914351701446, -2.372139952514217, -2.218465558491342, -1.9708601402895332, -1.7621690345367305, -1.5655021370623974, -1.3672217431315257, -1.146567525767843, -0.8651676311002514, -0.680654596135049, -0.4418854479604671, -0.08266603230520778, 0.23334241491830698, 0.6041059466942882, 0.8637859603168851, 1.3854375943249964)),
        (0.0004, (-4.113499195356743, -3.6461121400768786, -3.4451758452165473, -3.2101903641407845, -3.133127194136921, -2.869504156930148, -2.7030970975728987, -2.572180051554939, -2.374602562715796, -2.2200172960692055, -1.9720576009937074, -1.7637264903932712, -1.5663300803098072, -1.3676901263941372, -1.1469708933030094, -0.8666479668071111, -0.6807331576823397, -0.44278589791617257, -0.08511480133665107, 0.2310114947797832, 0.5990127505139679, 0.8599207142247363, 1.3987169000755404)),
        (0.001, (-4.109514786746267, -3.658594483698256, -3.441980725835425, -3.2092365349240026, -3.12785166271668, -2.8637596271059467, -2.695075235454765, -2.5681032681450597, -2.371142874438038, -2.2178129166416056, -1.9695834174249385, -1.759635882812052, -1.5637050977381137, -1.3655573135395322, -1.1448562305671361, -0.8616154396990098, -0.6782089636325875, -0.438458869547582, -0.07605426063134499, 0.24191519702727937, 0.6163389857633979, 0.8671740105147409, 1.3792828261508303)),
        (0.002, (-4.122212770205279, -3.6569496204065453, -3.439146592169007, -3.2098984031291145, -3.1298152626966806, -2.8671170869408065, -2.6998443977524285, -2.570262270868789, -2.3734795847162675, -2.2183738363658208, -1.969986174381501, -1.761074539447946, -1.565623778283229, -1.366278032034551, -1.1442086405416414, -0.8621184391215131, -0.6777923974819591, -0.4381158532168132, -0.07532621661275432, 0.24063851561706115, 0.6137533243641559, 0.8681207159595207, 1.3698411384355353)),
        (0.004, (-4.141625263945394, -3.6799279241303884, -3.4619052086797724, -3.2242188615451957, -3.1422770507903426, -2.8757935264639967, -2.704670658192149, -2.574838585581676, -2.376834238313455, -2.220678582110589, -1.970702279510396, -1.760572889997963, -1.5644494053284188, -1.364807053749647, -1.142869819267804, -0.8602708414318855, -0.6746799910986954, -0.43540012185417604, -0.07163622073363343, 0.24779051157025075, 0.6203367250224258, 0.8642410714226381, 1.392285970524808)),
        (0.01, (-4.236834185423013, -3.730773724857722, -3.49968256377298, -3.251962469948564, -3.168087771550622, -2.891190148920923, -2.7159950722846076, -2.5811425113003335, -2.3784931415152615, -2.2209794139518824, -1.9681126057738734, -1.7551584832193692, -1.5576143807252274, -1.3567226477689847, -1.1333667830690082, -0.8487690607843812, -0.662717708587984, -0.42279510974161866, -0.059424358588674, 0.25935632787855434, 0.6323559915564514, 0.8894422572132916, 1.4085724675660056)),
        (0.02, (-4.357161964824784, -3.823371169538618, -3.570684493598584, -3.3036909795382985, -3.215251969804255, -2.9209114091114485, -2.7368823211786153, -2.5989729813545943, -2.388888942386959, -2.2260269807466186, -1.9683151909601257, -1.7519816745603205, -1.5511852859706483, -1.348179162182715, -1.1223085004957383, -0.835214628317097, -0.6474415626652191, -0.4044924245349179, -0.039296371183892884, 0.2835265958020781, 0.659287432288694, 0.9157500285438831, 1.4599328348127982)),
        (0.04, (-4.699086637411968, -4.02617806120477, -3.7261536163422386, -3.417760167433466, -3.3157229961999897, -2.9886145074363655, -2.7853930126533184, -2.6332845678562857, -2.4070382794608784, -2.2338680120177243, -1.9624983884548444, -1.7392210151776293, -1.534374200381523, -1.3280376617607694, -1.0981612739932003, -0.8045369945539421, -0.6145297231616292, -0.36982299177674466, 0.0015105948497556054, 0.32776865555435997, 0.7155195931959578, 0.987342571611532, 1.5621533311477305)),
    ),
    'constant+trend': (
        (0.0, (-4.5897655154713854, -4.173837975051245, -3.9608653860597776, -3.7383595581801927, -3.6620454502693427, -3.4110906089239754, -3.2483892209632437, -3.1272859997276017, -2.9394618392167557, -2.792555946889691, -2.558041948665288, -2.3622100266822352, -2.18090852544333, -2.0020640754395678, -1.8102378629246925, -1.5824843300949405, -1.4374164082234182, -1.247286812684196, -0.9406923940018995, -0.6621142479910648, -0.3261126441710404, -0.09796901202965219, 0.39506463400782826)),
        (0.0004, (-4.603274653689809, -4.183169549434973, -3.969649576474459, -3.743730542833828, -3.6674307244504583, -3.4169714177581043, -3.252602373824954, -3.130331898732527, -2.9406890683018414, -2.7932021658541384, -2.558342241531547, -2.3625826715694895, -2.179564708393412, -2.0015480023456353, -1.8094946820264783, -1.5822479697798875, -1.4369246801671598, -1.2485352829566234, -0.9401158633956199, -0.6612208338238446, -0.32405906174984606, -0.09707753565442698, 0.411842486914003)),
        (0.001, (-4.605325726217708, -4.177797835664099, -3.9642874945390267, -3.7437871077370066, -3.6672441179232003, -3.4133798472262495, -3.2505452083272504, -3.1289109765582936, -2.9405574296841044, -2.7935854606857595, -2.557956140947906, -2.3606704327357066, -2.180326928667819, -2.0001482097879184, -1.808628656673557, -1.5797842774406883, -1.4356802370002357, -1.2431020894962381, -0.9358490633654374, -0.6570644628263567, -0.322843476657706, -0.08875253950472663, 0.373774144827996)),
        (0.002, (-4.632641361678393, -4.187155763564608, -3.977292882591284, -3.7507955319808066, -3.672731284208471, -3.4165567180925125, -3.2550956844401453, -3.1323814326887773, -2.943747302664448, -2.7960939901017694, -2.5590567560188555, -2.360523683268636, -2.1792938702184177, -1.999623397106518, -1.8074853715886385, -1.5795556488966263, -1.4318779618811146, -1.2389533728807913, -0.9343334074919806, -0.6524877636679735, -0.31587990347893574, -0.08605318069332242, 0.4034816027996357)),
        (0.004, (-4.676574188139788, -4.21045213035477, -3.997765783709313, -3.768161429740602, -3.6901861565331173, -3.431623203015489, -3.2660431162150174, -3.1403431083428925, -2.9471237398928958, -2.7982940096640623, -2.5593143172367876, -2.3592327968402125, -2.175845794499022, -1.9959885356440172, -1.8039375767563979, -1.5753657406781458, -1.4293519905229524, -1.2368768234356453, -0.9267610858508231, -0.6447007856682391, -0.30864354750622996, -0.07204149789800153, 0.4028764483791298)),
        (0.01, (-4.76294151648613, -4.282807266299, -4.053301151516037, -3.807405928023943, -3.7245834629683903, -3.455545111836542, -3.2828802065307916, -3.15343310591857, -2.9562504364787068, -2.802589966180234, -2.557872207992392, -2.355963723269058, -2.171138944963602, -1.9897380546177734, -1.794656287857891, -1.564437681988464, -1.4181261001505903, -1.2236819264982508, -0.9116684613073887, -0.6273651672100282, -0.2883691511074711, -0.055867315422973525, 0.4428055137070269)),
        (0.02, (-4.96592225949405, -4.409077114030653, -4.150232388274609, -3.883779977226565, -3.7937659764244596, -3.500747609003607, -3.3163044093604377, -3.180299986884575, -2.9733208073504453, -2.812303027380765, -2.5596991681592356, -2.351708060329432, -2.1625563925691367, -1.9766682656360446, -1.78041147999378, -1.5462681229242223, -1.3967170469032952, -1.1987323196113684, -0.8825029804553418, -0.5955497545545593, -0.2514574365075637, -0.018212437303969157, 0.48348305336952496)),
        (0.04, (-5.405109946647618, -4.683334935738406, -4.373823204423205, -4.0523976584904045, -3.9459390926917144, -3.6053478159164642, -3.3945321650002223, -3.238581605103004, -3.0073930043256074, -2.831799074594141, -2.5603468476438396, -2.33937486229778, -2.141477016501498, -1.9494810763470831, -1.746798575498227, -1.5070724269430158, -1.3528574413920096, -1.145870659861565, -0.8185209453550466, -0.5226224311308729, -0.17379862630692763, 0.07319773751095578, 0.6030320697741512)),
    ),
}
