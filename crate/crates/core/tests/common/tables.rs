//! Reference values computed at 30 significant digits.

/// (μ, x, J_μ(x))
pub const J_TABLE: [(f64, f64, f64); 64] = [
    (0.0, 2.5, -0.048383776468197996327),
    (0.0, 5.0, -0.17759677131433830435),
    (0.0, 7.3, 0.28821694763501439904),
    (0.0, 11.0, -0.17119030040719608835),
    (0.0, 19.9, 0.17287775639261846235),
    (0.0, 24.9, 0.083245968353015490053),
    (0.0, 30.0, -0.086367983581040211336),
    (0.0, 100.0, 0.019985850304223122424),
    (0.5, 2.5, 0.30200490606236568126),
    (0.5, 5.0, -0.34216798479816180976),
    (0.5, 7.3, 0.25114271474902147417),
    (0.5, 11.0, -0.24056889072320311853),
    (0.5, 19.9, 0.15518692991940252895),
    (0.5, 24.9, -0.036879562587176999084),
    (0.5, 30.0, -0.14392965337039988914),
    (0.5, 100.0, -0.040402132716252123744),
    (1.0, 2.5, 0.49709410246427403801),
    (1.0, 5.0, -0.32757913759146522204),
    (1.0, 7.3, 0.082570430493257831051),
    (1.0, 11.0, -0.17678529895672150114),
    (1.0, 19.9, 0.050117424807379740922),
    (1.0, 24.9, -0.13485569953140886933),
    (1.0, 30.0, -0.11875106261662293652),
    (1.0, 100.0, -0.077145352014112158033),
    (1.5, 2.5, 0.52508026466400314595),
    (1.5, 5.0, -0.16965130614474076152),
    (1.5, 7.3, -0.12095301097363061029),
    (1.5, 11.0, -0.022934594839359303149),
    (1.5, 19.9, -0.081128373869961532532),
    (1.5, 24.9, -0.1570669578129892926),
    (1.5, 30.0, -0.027267945711177687796),
    (1.5, 100.0, -0.069207112795890604984),
    (2.0, 2.5, 0.44605905843961722674),
    (2.0, 5.0, 0.046565116277752215532),
    (2.0, 7.3, -0.26559491188343691053),
    (2.0, 11.0, 0.13904751877870126996),
    (2.0, 19.9, -0.16784082927629889004),
    (2.0, 24.9, -0.094077751447907769332),
    (2.0, 30.0, 0.078451246073265348901),
    (2.0, 100.0, -0.021528757344505365585),
    (2.5, 2.5, 0.32809141153443809388),
    (2.5, 5.0, 0.24037720111131735285),
    (2.5, 7.3, -0.30084943158749980838),
    (2.5, 11.0, 0.23431400122155967221),
    (2.5, 19.9, -0.16741733804050225835),
    (2.5, 24.9, 0.017955832730190336244),
    (2.5, 30.0, 0.14120285879928212036),
    (2.5, 100.0, 0.038325919332375405594),
    (3.0, 2.5, 0.21660039103911352477),
    (3.0, 5.0, 0.36483123061366699446),
    (3.0, 7.3, -0.22810188905952463488),
    (3.0, 11.0, 0.22734803305806741749),
    (3.0, 19.9, -0.083854274913168464947),
    (3.0, 24.9, 0.11974280773254818263),
    (3.0, 30.0, 0.12921122875972498304),
    (3.0, 100.0, 0.076284201720331943409),
    (3.5, 2.5, 0.1311025584048730418),
    (3.5, 5.0, 0.41002850725605811437),
    (3.5, 7.3, -0.08510824353835556485),
    (3.5, 11.0, 0.12944095903097733597),
    (3.5, 19.9, 0.039063716070840359088),
    (3.5, 24.9, 0.16067254671463393864),
    (3.5, 30.0, 0.050801755511058041189),
    (3.5, 100.0, 0.071123408762509375263),
];

/// (ν, x, e^{-x} I_ν(x), e^x K_ν(x))
pub const IK_TABLE: [(f64, f64, f64, f64); 72] = [
    (0.0, 0.001, 0.99900074958351555937, 7.0307160023782514978),
    (0.0, 0.1, 0.90710092578230109165, 2.6823261022628943375),
    (0.0, 1.5, 0.36743360905415833924, 0.95821005329489649642),
    (0.0, 2.5, 0.27004644161220273956, 0.75954869032809957869),
    (0.0, 7.0, 0.15373774467288124815, 0.46584509609301588792),
    (0.0, 24.9, 0.080359332611532213624, 0.24993215015402473826),
    (0.0, 60.0, 0.051611549173609840949, 0.16146817823629392565),
    (0.0, 400.0, 0.019953356281939989871, 0.062646151299578113829),
    (0.5, 0.001, 0.025206110707457800594, 39.633272976060109721),
    (0.5, 0.1, 0.22868316607552338863, 3.9633272976060109033),
    (0.5, 1.5, 0.30951761682539946098, 1.0233267079464884885),
    (0.5, 2.5, 0.25061317888151193646, 0.79266545952120220267),
    (0.5, 7.0, 0.15078588339013012785, 0.4737082174254673015),
    (0.5, 24.9, 0.079948513324558086881, 0.2511656621258573828),
    (0.5, 60.0, 0.051503226936425277379, 0.1618021593796416045),
    (0.5, 400.0, 0.019947114020071633897, 0.06266570686577501256),
    (1.0, 0.001, 0.00049950031235422134737, 1000.9967345590684316),
    (1.0, 0.1, 0.045298446808809327277, 10.890182683049696015),
    (1.0, 1.5, 0.21903938742092567212, 1.2431658735525529948),
    (1.0, 2.5, 0.20658464953126655421, 0.90017442390787808913),
    (1.0, 7.0, 0.14228923470959867444, 0.49807157509547654022),
    (1.0, 24.9, 0.0787287948821031292, 0.25490238558081708606),
    (1.0, 60.0, 0.051179630189028718118, 0.16280823094404427103),
    (1.0, 400.0, 0.019928398958903541852, 0.062724410168277165176),
    (1.5, 0.001, 8.4020363423501935534e-6, 39672.906249036169006),
    (1.5, 0.1, 0.0076176951894028301885, 43.596600273666117737),
    (1.5, 1.5, 0.13560732116156079381, 1.7055445132441474808),
    (1.5, 2.5, 0.1537680539699152986, 1.1097316433296830837),
    (1.5, 7.0, 0.12924529367161929142, 0.54138081991481977314),
    (1.5, 24.9, 0.076737729656905151482, 0.2612526365084219369),
    (1.5, 60.0, 0.050644839820818189423, 0.16449886203596896458),
    (1.5, 400.0, 0.019897246235021454812, 0.062822371132939450092),
    (2.0, 0.001, 1.2487507288542741095e-7, 2002000.4998341391998),
    (2.0, 0.1, 0.0011319896061145964131, 220.48597976325680255),
    (2.0, 1.5, 0.075381092492924109751, 2.6157645513649671562),
    (2.0, 2.5, 0.10477872198718949619, 1.47968822945440205),
    (2.0, 7.0, 0.1130836776129959126, 0.60815126040600918512),
    (2.0, 24.9, 0.074035734629033969954, 0.27040623734927109172),
    (2.0, 60.0, 0.049905561500642217011, 0.16689511926776206802),
    (2.0, 400.0, 0.019853714287145472162, 0.062959773350419499655),
    (2.5, 0.001, 1.6804072204584046375e-9, 119018758.3803814806),
    (2.5, 0.1, 0.00015231039343849566541, 1311.8613355075894704),
    (2.5, 1.5, 0.03830297450227787336, 4.4344157344347834501),
    (2.5, 2.5, 0.066091514117613578139, 2.1243434315168219032),
    (2.5, 7.0, 0.09539504324515043153, 0.70572856881753291855),
    (2.5, 24.9, 0.070703003727340598223, 0.28264188339193231676),
    (2.5, 60.0, 0.048970984945384367908, 0.17002710248144005273),
    (2.5, 400.0, 0.019797884673308972986, 0.063136874649272058436),
    (3.0, 0.001, 2.081251171397724697e-11, 8008003000.3332911916),
    (3.0, 0.1, 0.000018862564225473265497, 8830.3293732133213085),
    (3.0, 1.5, 0.018023140773128046111, 8.2185380105257987445),
    (3.0, 2.5, 0.038938694351763360313, 3.2676755910349213691),
    (3.0, 7.0, 0.077669990359315295817, 0.84558658104176750314),
    (3.0, 24.9, 0.066835504178643856239, 0.29834113856865180207),
    (3.0, 60.0, 0.047852592755652570318, 0.17393457222856174223),
    (3.0, 400.0, 0.019729861816032087131, 0.063354007901781360172),
    (3.5, 0.001, 2.4005817054075355455e-13, 595093831574.81363965),
    (3.5, 0.1, 2.1755174780473407538e-6, 65636.663375653135997),
    (3.5, 1.5, 0.0079307394873012159445, 16.486930294693425648),
    (3.5, 2.5, 0.021585025734688142324, 5.35841850636332689),
    (3.5, 7.0, 0.06110597706794041176, 1.0454726547844861435),
    (3.5, 24.9, 0.06254033935021025143, 0.31800803477989429291),
    (3.5, 60.0, 0.04656392440870282543, 0.17866778724275563564),
    (3.5, 400.0, 0.01964977267660509265, 0.063611582066055350822),
    (4.5, 0.001, 2.6673129790658177281e-17, 4165656940042453.7712),
    (4.5, 0.1, 2.4169975181821099424e-8, 4595878.2976312268542),
    (4.5, 1.5, 0.0012928568948721989524, 81.373423776337436473),
    (4.5, 2.5, 0.0056534420604867796322, 17.127915249334137195),
    (4.5, 7.0, 0.03428906617721001977, 1.7512012236020190621),
    (4.5, 24.9, 0.053121382223265426135, 0.37204173252684236404),
    (4.5, 60.0, 0.043538527097702371608, 0.19087167765976154356),
    (4.5, 400.0, 0.019454013651468383865, 0.064250077335428027075),
];
